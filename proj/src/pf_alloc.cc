// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetnet/pf_alloc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hetnet {
namespace {

double XLogX(double n) { return n > 0.0 ? n * std::log(n) : 0.0; }

GroupFractions RegimeFractions(const PfPicoGroup& group, PfRegime regime,
                               double lambda) {
  const int n = static_cast<int>(group.users.size());
  GroupFractions f{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const int m = regime.m;
  if (regime.kind == PfRegimeKind::kA) {
    const double mu_m = group.users[m - 1].mu();
    for (int k = 0; k < m - 1; ++k) f.gamma[k] = mu_m / lambda;
    f.theta[m - 1] = std::max(0.0, m / lambda - 1.0 / mu_m);
    f.gamma[m - 1] = std::max(0.0, 1.0 - (m - 1) * mu_m / lambda);
    for (int k = m; k < n; ++k) f.theta[k] = 1.0 / lambda;
  } else {
    for (int k = 0; k < m - 1; ++k) f.gamma[k] = 1.0 / (m - 1);
    for (int k = m - 1; k < n; ++k) f.theta[k] = 1.0 / lambda;
  }
  return f;
}

}  // namespace

PfClusterProblem::PfClusterProblem(TpIndex macro,
                                   std::vector<PfPicoGroup> groups)
    : macro_(macro) {
  for (PfPicoGroup& g : groups) {
    if (g.users.empty()) continue;
    std::sort(g.users.begin(), g.users.end(),
              [](const PfUser& a, const PfUser& b) {
                if (a.mu() != b.mu()) return a.mu() < b.mu();
                return a.user < b.user;
              });
    groups_.push_back(std::move(g));
  }
  std::sort(groups_.begin(), groups_.end(),
            [](const PfPicoGroup& a, const PfPicoGroup& b) {
              return a.pico < b.pico;
            });
  for (const PfPicoGroup& g : groups_) {
    std::vector<double> ladder;
    for (const PfUser& u : g.users) ladder.push_back(u.mu());
    ladders_.push_back(std::move(ladder));
  }
}

PfClusterProblem PfClusterProblem::FromAssociation(const NetworkInstance& inst,
                                                   TpIndex macro,
                                                   const Association& assoc) {
  std::vector<PfPicoGroup> groups;
  for (TpIndex pico : inst.picos_of(macro)) groups.push_back({pico, {}});
  for (UserIndex u = 0; u < assoc.num_users(); ++u) {
    const auto& link = assoc.link(u);
    if (!link) throw std::invalid_argument("unassociated user");
    if (link->macro != macro) continue;
    for (PfPicoGroup& g : groups) {
      if (g.pico == link->pico) {
        g.users.push_back(
            {u, inst.peak_rate(u, macro), inst.peak_rate(u, link->pico)});
      }
    }
  }
  return PfClusterProblem(macro, std::move(groups));
}

int PfClusterProblem::num_users() const {
  int n = 0;
  for (const PfPicoGroup& g : groups_) n += static_cast<int>(g.users.size());
  return n;
}

PfRegime ClassifyLambda(std::span<const double> ladder, double lambda) {
  const int n = static_cast<int>(ladder.size());
  for (int m = 1; m <= n; ++m) {
    const double mu = ladder[m - 1];
    if (m >= 2 && lambda <= (m - 1) * mu) return {PfRegimeKind::kB, m};
    if (lambda < m * mu) return {PfRegimeKind::kA, m};
  }
  return {PfRegimeKind::kB, n + 1};
}

double HOfLambda(std::span<const double> ladder, double lambda) {
  const PfRegime r = ClassifyLambda(ladder, lambda);
  if (r.kind == PfRegimeKind::kA) return 1.0 / ladder[r.m - 1];
  return (r.m - 1) / lambda;
}

double GOfLambda(std::span<const double> ladder, double lambda) {
  const PfRegime r = ClassifyLambda(ladder, lambda);
  const int n = static_cast<int>(ladder.size());
  double g = 0.0;
  if (r.kind == PfRegimeKind::kA) {
    for (int j = r.m; j <= n; ++j) g += std::log(ladder[j - 1] / lambda);
    g += (r.m - 1) * std::log(ladder[r.m - 1] / lambda);
  } else {
    g -= XLogX(r.m - 1);
    for (int q = r.m; q <= n; ++q) g += std::log(ladder[q - 1] / lambda);
  }
  return g;
}

double MacroLoadExcess(const PfClusterProblem& cluster, double lambda) {
  double load = -1.0;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    load += cluster.ladder(g).size() / lambda - HOfLambda(cluster.ladder(g), lambda);
  }
  return load;
}

PfDualSolution PfBisection(const PfClusterProblem& cluster, double rel_tol) {
  if (cluster.num_groups() == 0) throw std::invalid_argument("empty cluster");
  const double total = cluster.num_users();
  double hi = total;
  double lo = total * 0.5;
  while (MacroLoadExcess(cluster, lo) <= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) {
      throw std::runtime_error("pf bisection: no bracket");
    }
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (MacroLoadExcess(cluster, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double lambda = 0.5 * (lo + hi);

  // Within the bracketing regimes the root has a closed form.
  std::vector<PfRegime> regimes;
  double numer = total;
  double denom = 1.0;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PfRegime r = ClassifyLambda(cluster.ladder(g), lambda);
    regimes.push_back(r);
    if (r.kind == PfRegimeKind::kA) {
      denom += 1.0 / cluster.ladder(g)[r.m - 1];
    } else {
      numer -= r.m - 1;
    }
  }
  const double closed = numer / denom;
  if (closed > 0.0 &&
      std::abs(MacroLoadExcess(cluster, closed)) <=
          std::abs(MacroLoadExcess(cluster, lambda))) {
    bool same = true;
    for (int g = 0; g < cluster.num_groups() && same; ++g) {
      same = ClassifyLambda(cluster.ladder(g), closed) == regimes[g];
    }
    if (same) lambda = closed;
  }

  PfDualSolution out;
  out.lambda = lambda;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PfPicoGroup& group = cluster.group(g);
    const PfRegime r = ClassifyLambda(cluster.ladder(g), lambda);
    out.regimes.push_back(r);
    out.fractions.push_back(RegimeFractions(group, r, lambda));
    out.objective += GOfLambda(cluster.ladder(g), lambda);
    for (const PfUser& u : group.users) out.objective += std::log(u.pico_rate);
  }
  return out;
}

double PfObjective(const PfClusterProblem& cluster,
                   const ClusterFractions& fractions) {
  double v = 0.0;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PfPicoGroup& group = cluster.group(g);
    for (size_t k = 0; k < group.users.size(); ++k) {
      const PfUser& u = group.users[k];
      v += std::log(u.macro_rate * fractions[g].theta[k] +
                    u.pico_rate * fractions[g].gamma[k]);
    }
  }
  return v;
}

PfKktReport VerifyKktPf(const PfClusterProblem& cluster,
                        const ClusterFractions& fractions, double share_tol) {
  PfKktReport rep;
  double macro_sum = 0.0;
  std::vector<std::vector<double>> rates(cluster.num_groups());
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PfPicoGroup& group = cluster.group(g);
    double beta = 0.0;
    double pico_sum = 0.0;
    for (size_t k = 0; k < group.users.size(); ++k) {
      const PfUser& u = group.users[k];
      const double r = u.macro_rate * fractions[g].theta[k] +
                       u.pico_rate * fractions[g].gamma[k];
      rates[g].push_back(r);
      rep.lambda = std::max(rep.lambda, u.macro_rate / r);
      beta = std::max(beta, u.pico_rate / r);
      macro_sum += fractions[g].theta[k];
      pico_sum += fractions[g].gamma[k];
    }
    rep.beta.push_back(beta);
    rep.budget = std::max(rep.budget, std::abs(pico_sum - 1.0));
  }
  rep.budget = std::max(rep.budget, std::abs(macro_sum - 1.0));
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PfPicoGroup& group = cluster.group(g);
    for (size_t k = 0; k < group.users.size(); ++k) {
      const PfUser& u = group.users[k];
      const double r = rates[g][k];
      if (fractions[g].theta[k] > share_tol) {
        rep.stationarity = std::max(
            rep.stationarity, std::abs(u.macro_rate / r - rep.lambda) / rep.lambda);
      }
      if (fractions[g].gamma[k] > share_tol) {
        rep.stationarity =
            std::max(rep.stationarity,
                     std::abs(u.pico_rate / r - rep.beta[g]) / rep.beta[g]);
      }
    }
  }
  return rep;
}

double OrthogonalSplitValue(const PfClusterProblem& cluster,
                            const std::vector<std::vector<bool>>& on_macro) {
  double v = 0.0;
  int macro_count = 0;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PfPicoGroup& group = cluster.group(g);
    int pico_count = 0;
    for (size_t k = 0; k < group.users.size(); ++k) {
      if (on_macro[g][k]) {
        v += std::log(group.users[k].macro_rate);
        ++macro_count;
      } else {
        v += std::log(group.users[k].pico_rate);
        ++pico_count;
      }
    }
    v -= XLogX(pico_count);
  }
  return v - XLogX(macro_count);
}

namespace {

SplitSolution FinishSplit(const PfClusterProblem& cluster,
                          std::vector<std::vector<bool>> on_macro) {
  SplitSolution out;
  out.value = OrthogonalSplitValue(cluster, on_macro);
  int macro_count = 0;
  for (const auto& row : on_macro) {
    macro_count += static_cast<int>(std::count(row.begin(), row.end(), true));
  }
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const int n = static_cast<int>(on_macro[g].size());
    const int pico_count =
        n - static_cast<int>(std::count(on_macro[g].begin(), on_macro[g].end(), true));
    GroupFractions f{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (int k = 0; k < n; ++k) {
      if (on_macro[g][k]) {
        f.theta[k] = 1.0 / macro_count;
      } else {
        f.gamma[k] = 1.0 / pico_count;
      }
    }
    out.fractions.push_back(std::move(f));
  }
  out.on_macro = std::move(on_macro);
  return out;
}

std::vector<std::vector<bool>> EmptySplit(const PfClusterProblem& cluster) {
  std::vector<std::vector<bool>> s;
  for (const PfPicoGroup& g : cluster.groups()) s.emplace_back(g.users.size(), false);
  return s;
}

std::vector<std::vector<bool>> ExactSplit(const PfClusterProblem& cluster) {
  // Given c users of pico b on the macro, the best choice is the c users
  // with the largest mu; value_b(c) collects everything except the macro's
  // shared -C ln C term, which a knapsack over total C then accounts for.
  const int num_groups = cluster.num_groups();
  std::vector<std::vector<double>> value(num_groups);
  for (int g = 0; g < num_groups; ++g) {
    const PfPicoGroup& group = cluster.group(g);
    const int n = static_cast<int>(group.users.size());
    double base = 0.0;
    for (const PfUser& u : group.users) base += std::log(u.pico_rate);
    value[g].resize(n + 1);
    double gain = 0.0;
    for (int c = 0; c <= n; ++c) {
      if (c > 0) gain += std::log(group.users[n - c].mu());
      value[g][c] = base + gain - XLogX(n - c);
    }
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const int total = cluster.num_users();
  std::vector<std::vector<double>> dp(num_groups + 1,
                                      std::vector<double>(total + 1, neg_inf));
  std::vector<std::vector<int>> pick(num_groups + 1, std::vector<int>(total + 1, 0));
  dp[0][0] = 0.0;
  for (int g = 0; g < num_groups; ++g) {
    const int n = static_cast<int>(value[g].size()) - 1;
    for (int c0 = 0; c0 <= total; ++c0) {
      if (dp[g][c0] == neg_inf) continue;
      for (int c = 0; c <= n && c0 + c <= total; ++c) {
        const double v = dp[g][c0] + value[g][c];
        if (v > dp[g + 1][c0 + c]) {
          dp[g + 1][c0 + c] = v;
          pick[g + 1][c0 + c] = c;
        }
      }
    }
  }
  int best_c = 0;
  double best = neg_inf;
  for (int c = 0; c <= total; ++c) {
    const double v = dp[num_groups][c] - XLogX(c);
    if (v > best) best = v, best_c = c;
  }
  std::vector<std::vector<bool>> split = EmptySplit(cluster);
  int c_left = best_c;
  for (int g = num_groups; g >= 1; --g) {
    const int c = pick[g][c_left];
    const int n = static_cast<int>(split[g - 1].size());
    for (int k = n - c; k < n; ++k) split[g - 1][k] = true;
    c_left -= c;
  }
  return split;
}

std::vector<std::vector<bool>> EnumerateSplit(const PfClusterProblem& cluster) {
  const int total = cluster.num_users();
  if (total > 20) throw std::invalid_argument("instance too large");
  std::vector<std::vector<bool>> best_split = EmptySplit(cluster);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<bool>> split = EmptySplit(cluster);
  for (uint32_t mask = 0; mask < (1u << total); ++mask) {
    int bit = 0;
    for (auto& row : split) {
      for (size_t k = 0; k < row.size(); ++k) row[k] = (mask >> bit++) & 1u;
    }
    const double v = OrthogonalSplitValue(cluster, split);
    if (v > best) best = v, best_split = split;
  }
  return best_split;
}

std::vector<std::vector<bool>> HeuristicSplit(const PfClusterProblem& cluster) {
  std::vector<std::vector<bool>> split = EmptySplit(cluster);
  for (int g = 0; g < cluster.num_groups(); ++g) {
    for (size_t k = 0; k < split[g].size(); ++k) {
      split[g][k] = cluster.group(g).users[k].mu() > 1.0;
    }
  }
  double current = OrthogonalSplitValue(cluster, split);
  for (bool improved = true; improved;) {
    improved = false;
    for (int g = 0; g < cluster.num_groups(); ++g) {
      for (size_t k = 0; k < split[g].size(); ++k) {
        split[g][k] = !split[g][k];
        const double v = OrthogonalSplitValue(cluster, split);
        if (v > current + 1e-12) {
          current = v;
          improved = true;
        } else {
          split[g][k] = !split[g][k];
        }
      }
    }
  }
  return split;
}

}  // namespace

SplitSolution OrthogonalSplitSolve(const PfClusterProblem& cluster,
                                   SplitMode mode) {
  switch (mode) {
    case SplitMode::kExact:
      return FinishSplit(cluster, ExactSplit(cluster));
    case SplitMode::kEnumerate:
      return FinishSplit(cluster, EnumerateSplit(cluster));
    case SplitMode::kHeuristic:
      return FinishSplit(cluster, HeuristicSplit(cluster));
  }
  throw std::invalid_argument("unknown split mode");
}

PfNetworkSolution PfAllocate(const NetworkInstance& inst,
                             const Association& assoc) {
  for (UserIndex u = 0; u < assoc.num_users(); ++u) {
    if (!assoc.IsAssigned(u)) throw std::invalid_argument("unassociated user");
  }
  PfNetworkSolution out;
  out.fractions = AllocationFractions(inst.num_users());
  for (TpIndex macro : inst.macros()) {
    const PfClusterProblem cluster =
        PfClusterProblem::FromAssociation(inst, macro, assoc);
    if (cluster.num_groups() == 0) {
      out.lambda.push_back(0.0);
      continue;
    }
    const PfDualSolution sol = PfBisection(cluster);
    out.lambda.push_back(sol.lambda);
    out.objective += sol.objective;
    for (int g = 0; g < cluster.num_groups(); ++g) {
      const PfPicoGroup& group = cluster.group(g);
      for (size_t k = 0; k < group.users.size(); ++k) {
        out.fractions.theta[group.users[k].user] = sol.fractions[g].theta[k];
        out.fractions.gamma[group.users[k].user] = sol.fractions[g].gamma[k];
      }
    }
  }
  return out;
}

}  // namespace hetnet
