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

#include "hetnet/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "hetnet/lp_solver.h"
#include "hetnet/wsr_assoc.h"

namespace hetnet {
namespace {

LinearProgram BuildWsrLp(const ClusterProblem& cluster) {
  const int n = cluster.num_users();
  LinearProgram lp(2 * n);
  std::vector<double> macro_row(2 * n, 0.0);
  int col = 0;
  for (const PicoGroup& g : cluster.groups()) {
    std::vector<double> pico_row(2 * n, 0.0);
    for (const ClusterUser& u : g.users) {
      const int th = 2 * col;
      const int ga = 2 * col + 1;
      lp.objective[th] = u.weight * u.macro_rate;
      lp.objective[ga] = u.weight * u.pico_rate;
      macro_row[th] = 1.0;
      pico_row[ga] = 1.0;
      std::vector<double> rate(2 * n, 0.0);
      rate[th] = u.macro_rate;
      rate[ga] = u.pico_rate;
      if (u.rate_min > 0.0) {
        lp.AddConstraint(rate, ConstraintSense::kGreaterEqual, u.rate_min);
      }
      if (!IsInfinite(u.rate_max)) {
        lp.AddConstraint(rate, ConstraintSense::kLessEqual, u.rate_max);
      }
      ++col;
    }
    lp.AddConstraint(pico_row, ConstraintSense::kLessEqual, g.budget);
  }
  lp.AddConstraint(macro_row, ConstraintSense::kLessEqual, cluster.macro_budget());
  return lp;
}

}  // namespace

LpWsrResult LpSolveWsr(const ClusterProblem& cluster) {
  const LpResult res = SolveLinearProgram(BuildWsrLp(cluster));
  if (res.status == LpStatus::kInfeasible) throw InfeasibleError("infeasible");
  if (res.status != LpStatus::kOptimal) {
    throw std::runtime_error("weighted-sum-rate LP unbounded");
  }
  LpWsrResult out;
  out.value = res.value;
  int col = 0;
  for (const PicoGroup& g : cluster.groups()) {
    GroupFractions f;
    for (size_t k = 0; k < g.users.size(); ++k, ++col) {
      f.theta.push_back(res.x[2 * col]);
      f.gamma.push_back(res.x[2 * col + 1]);
    }
    out.fractions.push_back(std::move(f));
  }
  return out;
}

bool LpFeasibleWsr(const ClusterProblem& cluster) {
  LinearProgram lp = BuildWsrLp(cluster);
  std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
  return SolveLinearProgram(lp).status == LpStatus::kOptimal;
}

BruteForceWsrResult BruteForceWsrAssoc(const NetworkInstance& inst,
                                       const GroundSet& ground) {
  if (ground.size() > 16) throw std::invalid_argument("too large");
  std::vector<std::map<std::vector<int>, std::optional<double>>> memo(
      inst.num_tps());
  auto slice_value = [&](TpIndex m, const std::vector<int>& slice)
      -> std::optional<double> {
    if (slice.empty()) return 0.0;
    auto it = memo[m].find(slice);
    if (it != memo[m].end()) return it->second;
    std::optional<double> v;
    try {
      v = LpSolveWsr(ClusterFromTuples(inst, ground, m, slice)).value;
    } catch (const InfeasibleError&) {
    }
    memo[m].emplace(slice, v);
    return v;
  };

  BruteForceWsrResult best;
  std::vector<int> chosen;
  std::function<void(UserIndex)> recurse = [&](UserIndex u) {
    if (u == inst.num_users()) {
      std::vector<std::vector<int>> slices(inst.num_tps());
      for (int idx : chosen) slices[ground[idx].macro].push_back(idx);
      double total = 0.0;
      for (TpIndex m : inst.macros()) {
        std::sort(slices[m].begin(), slices[m].end());
        const auto v = slice_value(m, slices[m]);
        if (!v) return;
        total += *v;
      }
      if (total > best.value) {
        best.value = total;
        best.tuples = chosen;
        std::sort(best.tuples.begin(), best.tuples.end());
      }
      return;
    }
    recurse(u + 1);
    for (int idx : ground.of_user(u)) {
      chosen.push_back(idx);
      recurse(u + 1);
      chosen.pop_back();
    }
  };
  recurse(0);
  return best;
}

BruteForceDcResult BruteForceDcPf(const NetworkInstance& inst) {
  const auto picos = inst.picos();
  const double count = std::pow(static_cast<double>(picos.size()), inst.num_users());
  if (picos.empty() || count > 1e6) throw std::invalid_argument("too large");
  BruteForceDcResult best;
  best.value = -std::numeric_limits<double>::infinity();
  Association assoc(inst.num_users());
  std::function<void(UserIndex)> recurse = [&](UserIndex u) {
    if (u == inst.num_users()) {
      const double v = PfAllocate(inst, assoc).objective;
      if (v > best.value) {
        best.value = v;
        best.association = assoc;
      }
      return;
    }
    for (TpIndex b : picos) {
      assoc.Assign(u, {inst.macro_of(b), b});
      recurse(u + 1);
    }
  };
  recurse(0);
  return best;
}

std::vector<double> ProjectOntoSimplex(std::vector<double> v, double total) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    cumulative += s[i];
    const double t = (cumulative - total) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) tau = t;
  }
  for (double& x : v) x = std::max(0.0, x - tau);
  return v;
}

double PfConvexOracle(const PfClusterProblem& cluster,
                      const ConvexOracleOptions& options) {
  struct Var {
    double r1, rb;
    int group;
  };
  std::vector<Var> users;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    for (const PfUser& u : cluster.group(g).users) {
      users.push_back({u.macro_rate, u.pico_rate, g});
    }
  }
  const int n = static_cast<int>(users.size());
  if (n == 0) return 0.0;
  const int num_groups = cluster.num_groups();
  std::vector<int> group_size(num_groups, 0);
  for (const Var& v : users) ++group_size[v.group];

  std::vector<double> theta(n, 1.0 / n);
  std::vector<double> gamma(n);
  for (int i = 0; i < n; ++i) gamma[i] = 1.0 / group_size[users[i].group];

  auto objective = [&](const std::vector<double>& th,
                       const std::vector<double>& ga) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = users[i].r1 * th[i] + users[i].rb * ga[i];
      if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();
      f += std::log(r);
    }
    return f;
  };
  auto project = [&](const std::vector<double>& th, const std::vector<double>& ga,
                     std::vector<double>& th_out, std::vector<double>& ga_out) {
    th_out = ProjectOntoSimplex(th);
    ga_out.assign(n, 0.0);
    for (int g = 0; g < num_groups; ++g) {
      std::vector<double> part;
      std::vector<int> where;
      for (int i = 0; i < n; ++i) {
        if (users[i].group == g) part.push_back(ga[i]), where.push_back(i);
      }
      part = ProjectOntoSimplex(part);
      for (size_t k = 0; k < where.size(); ++k) ga_out[where[k]] = part[k];
    }
  };
  // Upper bound from the Lagrangian dual with multipliers read off the
  // current gradient.
  auto dual_bound = [&](const std::vector<double>& th,
                        const std::vector<double>& ga) {
    double lambda = 0.0;
    std::vector<double> beta(num_groups, 0.0);
    for (int i = 0; i < n; ++i) {
      const double r = users[i].r1 * th[i] + users[i].rb * ga[i];
      lambda += th[i] * users[i].r1 / r;
      beta[users[i].group] += ga[i] * users[i].rb / r;
    }
    double bound = lambda;
    for (double b : beta) bound += b;
    for (int i = 0; i < n; ++i) {
      const double c = std::min(lambda > 0 ? lambda / users[i].r1 : kInfiniteRate,
                                beta[users[i].group] > 0
                                    ? beta[users[i].group] / users[i].rb
                                    : kInfiniteRate);
      if (!(c > 0.0) || IsInfinite(c)) return kInfiniteRate;
      bound += -std::log(c) - 1.0;
    }
    return bound;
  };

  double f = objective(theta, gamma);
  double step = 1e-2;
  std::vector<double> gt(n), gg(n), th_try, ga_try, th_step(n), ga_step(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (dual_bound(theta, gamma) - f <= options.gap_tol) return f;
    for (int i = 0; i < n; ++i) {
      const double r = users[i].r1 * theta[i] + users[i].rb * gamma[i];
      gt[i] = users[i].r1 / r;
      gg[i] = users[i].rb / r;
    }
    step *= 2.0;
    while (true) {
      for (int i = 0; i < n; ++i) {
        th_step[i] = theta[i] + step * gt[i];
        ga_step[i] = gamma[i] + step * gg[i];
      }
      project(th_step, ga_step, th_try, ga_try);
      const double f_try = objective(th_try, ga_try);
      double lin = 0.0;
      double sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dt = th_try[i] - theta[i];
        const double dg = ga_try[i] - gamma[i];
        lin += gt[i] * dt + gg[i] * dg;
        sq += dt * dt + dg * dg;
      }
      if (f_try >= f + lin - sq / (2.0 * step)) {
        theta.swap(th_try);
        gamma.swap(ga_try);
        f = f_try;
        break;
      }
      step *= 0.5;
      if (step < 1e-300) throw NotConvergedError("step size underflow");
    }
  }
  throw NotConvergedError("projected gradient did not converge");
}

}  // namespace hetnet
