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

#include "hetnet/wsr_alloc.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace hetnet {
namespace {

double UserRate(const ClusterUser& u, double theta, double gamma) {
  return u.macro_rate * theta + u.pico_rate * gamma;
}

// Replays the slope construction for one pico. The state starts at the
// cheapest allocation meeting all minimum rates (macro share = need()) and
// Advance() spends further macro resource one constant-slope piece at a time.
// Positions refer to the labeled order of PicoGroup::users.
class PicoProcess {
 public:
  PicoProcess(const PicoGroup& group, double gamma_b)
      : users_(group.users),
        theta_(users_.size(), 0.0),
        gamma_(users_.size(), 0.0),
        saturated_(users_.size(), false) {
    const int n = static_cast<int>(users_.size());
    baseline_ = 0.0;
    for (const ClusterUser& u : users_) baseline_ += u.weight * u.rate_min;

    // Leading users (best pico/macro ratio) are served by the pico alone.
    double used = 0.0;
    int fit = 0;
    while (fit < n) {
      const double need = users_[fit].rate_min / users_[fit].pico_rate;
      if (used + need > gamma_b) break;
      gamma_[fit] = need;
      used += need;
      ++fit;
    }
    if (fit == n) {
      need_ = 0.0;
      DistributeSlack(gamma_b - used);
    } else {
      const ClusterUser& s = users_[fit];
      const double xi = gamma_b - used;
      gamma_[fit] = xi;
      theta_[fit] = (s.rate_min - xi * s.pico_rate) / s.macro_rate;
      need_ = theta_[fit];
      for (int j = fit + 1; j < n; ++j) {
        theta_[j] = users_[j].rate_min / users_[j].macro_rate;
        need_ += theta_[j];
      }
    }
    UpdateSaturation();
  }

  double need() const { return need_; }
  double baseline() const { return baseline_; }
  double slack_value() const { return slack_value_; }
  double current_value() const { return baseline_ + slack_value_ + area_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& gamma() const { return gamma_; }

  // Spends up to `amount` additional macro resource; appends the pieces to
  // `curve` when given. Returns the amount actually spent.
  double Advance(double amount, SlopeCurve* curve) {
    const int n = static_cast<int>(users_.size());
    double spent = 0.0;
    while (amount - spent > kResourceTol) {
      int kp = -1;
      for (int k = n - 1; k >= 0; --k) {
        if (gamma_[k] > 0.0) {
          kp = k;
          break;
        }
      }
      int best = -1;
      double best_slope = 0.0;
      for (int k = 0; k < n; ++k) {
        if (saturated_[k]) continue;
        const ClusterUser& u = users_[k];
        double slope;
        if (kp >= 0 && k < kp) {
          slope = u.weight * u.pico_rate * users_[kp].macro_rate /
                  users_[kp].pico_rate;
        } else {
          slope = u.weight * u.macro_rate;
        }
        if (best < 0 || slope > best_slope ||
            (slope == best_slope && u.user < users_[best].user)) {
          best = k;
          best_slope = slope;
        }
      }
      if (best < 0) break;

      const ClusterUser& u = users_[best];
      const double left = amount - spent;
      if (kp >= 0 && best < kp) {
        const ClusterUser& b = users_[kp];
        const double exchange = b.macro_rate / b.pico_rate;  // pico freed per macro
        const double width_boundary = gamma_[kp] / exchange;
        const double width_user = Headroom(best) / (u.pico_rate * exchange);
        const double width = std::min(width_boundary, width_user);
        const double step = std::min(width, left);
        theta_[kp] += step;
        if (step == width && width_boundary <= width_user + kResourceTol) {
          gamma_[best] += gamma_[kp];
          gamma_[kp] = 0.0;
        } else {
          gamma_[kp] -= step * exchange;
          gamma_[best] += step * exchange;
        }
        if (step == width && width_user <= width_boundary + kResourceTol) {
          saturated_[best] = true;
        }
        Record(step, best_slope, curve);
        spent += step;
      } else {
        const double width = Headroom(best) / u.macro_rate;
        const double step = std::min(width, left);
        theta_[best] += step;
        if (step == width) saturated_[best] = true;
        Record(step, best_slope, curve);
        spent += step;
      }
      UpdateSaturation();
    }
    return spent;
  }

 private:
  double Headroom(int k) const {
    const ClusterUser& u = users_[k];
    if (IsInfinite(u.rate_max)) return kInfiniteRate;
    return u.rate_max - UserRate(u, theta_[k], gamma_[k]);
  }

  // Greedy fill of leftover pico resource in decreasing w * R_b order.
  void DistributeSlack(double leftover) {
    std::vector<int> order(users_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = users_[a].weight * users_[a].pico_rate;
      const double vb = users_[b].weight * users_[b].pico_rate;
      if (va != vb) return va > vb;
      return users_[a].user < users_[b].user;
    });
    for (int k : order) {
      if (leftover <= 0.0) break;
      const ClusterUser& u = users_[k];
      const double room = Headroom(k) / u.pico_rate;
      const double give = std::min(room, leftover);
      if (give <= 0.0) continue;
      gamma_[k] += give;
      leftover -= give;
      slack_value_ += u.weight * u.pico_rate * give;
    }
  }

  void Record(double width, double slope, SlopeCurve* curve) {
    area_ += width * slope;
    if (curve != nullptr) curve->Append(width, slope);
  }

  // Headroom below the tolerance counts as saturated.
  void UpdateSaturation() {
    for (size_t k = 0; k < users_.size(); ++k) {
      if (saturated_[k]) continue;
      const double h = Headroom(static_cast<int>(k));
      if (h <= kResourceTol * std::max(1.0, users_[k].macro_rate)) {
        saturated_[k] = true;
      }
    }
  }

  const std::vector<ClusterUser>& users_;
  std::vector<double> theta_;
  std::vector<double> gamma_;
  std::vector<bool> saturated_;
  double need_ = 0.0;
  double baseline_ = 0.0;
  double slack_value_ = 0.0;
  double area_ = 0.0;
};

void RequireUsers(const PicoGroup& group) {
  if (group.users.empty()) throw std::invalid_argument("no users");
}

}  // namespace

void LabelUsers(PicoGroup& group) {
  std::sort(group.users.begin(), group.users.end(),
            [](const ClusterUser& a, const ClusterUser& b) {
              const double ra = a.pico_macro_ratio();
              const double rb = b.pico_macro_ratio();
              if (ra != rb) return ra > rb;
              return a.user < b.user;
            });
}

ClusterProblem::ClusterProblem(TpIndex macro, double macro_budget,
                               std::vector<PicoGroup> groups)
    : macro_(macro), macro_budget_(macro_budget) {
  for (PicoGroup& g : groups) {
    if (g.users.empty()) continue;
    LabelUsers(g);
    groups_.push_back(std::move(g));
  }
  std::sort(groups_.begin(), groups_.end(),
            [](const PicoGroup& a, const PicoGroup& b) {
              return a.pico < b.pico;
            });
}

ClusterProblem ClusterProblem::FromAssociation(const NetworkInstance& inst,
                                               TpIndex macro,
                                               const Association& assoc) {
  std::vector<PicoGroup> groups;
  for (TpIndex pico : inst.picos_of(macro)) {
    PicoGroup g;
    g.pico = pico;
    for (UserIndex u = 0; u < assoc.num_users(); ++u) {
      const auto& link = assoc.link(u);
      if (!link || link->pico != pico) continue;
      ClusterUser cu;
      cu.user = u;
      cu.weight = inst.weight(u);
      cu.macro_rate = inst.peak_rate(u, macro);
      cu.pico_rate = inst.peak_rate(u, pico);
      cu.rate_min = inst.rate_min(u);
      cu.rate_max = inst.rate_max(u);
      g.users.push_back(cu);
    }
    groups.push_back(std::move(g));
  }
  return ClusterProblem(macro, 1.0, std::move(groups));
}

int ClusterProblem::num_users() const {
  int n = 0;
  for (const PicoGroup& g : groups_) n += static_cast<int>(g.users.size());
  return n;
}

double SlopeCurve::end() const {
  double z = start_;
  for (const SlopeSegment& s : segments_) z += s.width;
  return z;
}

void SlopeCurve::Append(double width, double slope) {
  if (!(width > 0.0)) return;
  if (!segments_.empty() && segments_.back().slope == slope) {
    segments_.back().width += width;
    return;
  }
  segments_.push_back({width, slope});
}

double SlopeCurve::ValueAt(double z) const {
  double value = start_value_;
  double at = start_;
  for (const SlopeSegment& s : segments_) {
    if (z <= at) break;
    const double take = std::min(s.width, z - at);
    value += take * s.slope;
    at += s.width;
  }
  return value;
}

double SlopeCurve::SlopeAt(double z) const {
  double at = start_;
  for (const SlopeSegment& s : segments_) {
    if (z < at + s.width) return s.slope;
    at += s.width;
  }
  return 0.0;
}

std::vector<double> SlopeCurve::Breakpoints() const {
  std::vector<double> out{start_};
  double at = start_;
  for (const SlopeSegment& s : segments_) {
    at += s.width;
    out.push_back(at);
  }
  return out;
}

std::string SlopeCurve::ToCsv() const {
  std::ostringstream os;
  os.precision(17);
  os << "breakpoint,slope\n";
  double at = start_;
  for (const SlopeSegment& s : segments_) {
    os << at << ',' << s.slope << '\n';
    at += s.width;
  }
  return os.str();
}

double MinMacroNeed(const PicoGroup& group, double gamma_b) {
  double used = 0.0;
  const int n = static_cast<int>(group.users.size());
  int fit = 0;
  while (fit < n) {
    const double need = group.users[fit].rate_min / group.users[fit].pico_rate;
    if (used + need > gamma_b) break;
    used += need;
    ++fit;
  }
  if (fit == n) return 0.0;
  const ClusterUser& s = group.users[fit];
  double need = (s.rate_min - (gamma_b - used) * s.pico_rate) / s.macro_rate;
  for (int j = fit + 1; j < n; ++j) {
    need += group.users[j].rate_min / group.users[j].macro_rate;
  }
  return need;
}

double MinPicoNeed(const PicoGroup& group, double z_b) {
  // Trailing users (best macro/pico ratio) are served by the macro alone.
  double used = 0.0;
  int first = static_cast<int>(group.users.size());
  while (first > 0) {
    const ClusterUser& u = group.users[first - 1];
    const double need = u.rate_min / u.macro_rate;
    if (used + need > z_b) break;
    used += need;
    --first;
  }
  if (first == 0) return 0.0;
  const ClusterUser& s = group.users[first - 1];
  double need = (s.rate_min - (z_b - used) * s.macro_rate) / s.pico_rate;
  for (int j = 0; j < first - 1; ++j) {
    need += group.users[j].rate_min / group.users[j].pico_rate;
  }
  return need;
}

double SlackValue(const PicoGroup& group, double gamma_b) {
  return PicoProcess(group, gamma_b).slack_value();
}

SlopeCurve PicoSlopeCurve(const PicoGroup& group, double gamma_b,
                          double z_cap) {
  RequireUsers(group);
  PicoProcess proc(group, gamma_b);
  SlopeCurve curve(proc.need(), proc.baseline() + proc.slack_value());
  if (z_cap > proc.need()) proc.Advance(z_cap - proc.need(), &curve);
  return curve;
}

PicoSolution SolveSinglePico(const PicoGroup& group, double z_b,
                             double gamma_b) {
  RequireUsers(group);
  PicoProcess proc(group, gamma_b);
  if (z_b < proc.need() - kResourceTol) {
    throw InfeasibleError("infeasible: macro share below minimum need");
  }
  if (z_b > proc.need()) proc.Advance(z_b - proc.need(), nullptr);
  PicoSolution out;
  out.value = proc.current_value();
  out.fractions.theta = proc.theta();
  out.fractions.gamma = proc.gamma();
  return out;
}

bool FeasibilityCheck(const ClusterProblem& cluster) {
  double need = 0.0;
  for (const PicoGroup& g : cluster.groups()) need += MinMacroNeed(g, g.budget);
  return need <= cluster.macro_budget() + kResourceTol;
}

ClusterSolution Algorithm1Allocate(const ClusterProblem& cluster) {
  const int num_groups = cluster.num_groups();
  std::vector<double> need(num_groups);
  double total_need = 0.0;
  double start_value = 0.0;
  struct Piece {
    double slope;
    int group;
    int seq;
    double width;
  };
  std::vector<Piece> pieces;
  for (int g = 0; g < num_groups; ++g) {
    const PicoGroup& group = cluster.group(g);
    const SlopeCurve curve = PicoSlopeCurve(group, group.budget, 1.0);
    need[g] = curve.start();
    total_need += need[g];
    start_value += curve.start_value();
    int seq = 0;
    for (const SlopeSegment& s : curve.segments()) {
      pieces.push_back({s.slope, g, seq++, s.width});
    }
  }
  if (total_need > cluster.macro_budget() + kResourceTol) {
    throw InfeasibleError("infeasible: minimum macro need exceeds budget");
  }
  // Each pico's pieces are already in non-increasing slope order, so a
  // stable sort by (slope desc, pico, seq) is the k-way merge.
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    return std::tie(b.slope, a.group, a.seq) < std::tie(a.slope, b.group, b.seq);
  });

  ClusterSolution out;
  out.macro_share = need;
  out.curve = SlopeCurve(total_need, start_value);
  double budget_left = std::max(0.0, cluster.macro_budget() - total_need);
  double curve_left = std::max(0.0, 1.0 - total_need);
  for (const Piece& p : pieces) {
    if (curve_left <= 0.0) break;
    const double w = std::min(p.width, curve_left);
    out.curve.Append(w, p.slope);
    curve_left -= w;
    if (budget_left > 0.0) {
      const double give = std::min(w, budget_left);
      out.macro_share[p.group] += give;
      budget_left -= give;
    }
  }
  out.value = out.curve.ValueAt(cluster.macro_budget());

  out.fractions.resize(num_groups);
  for (int g = 0; g < num_groups; ++g) {
    const PicoGroup& group = cluster.group(g);
    PicoSolution s = SolveSinglePico(
        group, std::max(out.macro_share[g], need[g]), group.budget);
    out.fractions[g] = std::move(s.fractions);
  }
  return out;
}

double WeightedSumRate(const ClusterProblem& cluster,
                       const ClusterFractions& fractions) {
  double value = 0.0;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PicoGroup& group = cluster.group(g);
    for (size_t k = 0; k < group.users.size(); ++k) {
      const ClusterUser& u = group.users[k];
      value += u.weight *
               UserRate(u, fractions[g].theta[k], fractions[g].gamma[k]);
    }
  }
  return value;
}

void ScatterFractions(const ClusterProblem& cluster,
                      const ClusterFractions& fractions,
                      AllocationFractions& out) {
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PicoGroup& group = cluster.group(g);
    for (size_t k = 0; k < group.users.size(); ++k) {
      out.theta[group.users[k].user] = fractions[g].theta[k];
      out.gamma[group.users[k].user] = fractions[g].gamma[k];
    }
  }
}

std::vector<KktViolation> VerifyKktWsr(const ClusterProblem& cluster,
                                       const ClusterFractions& fractions,
                                       double tol) {
  struct Entry {
    const ClusterUser* u;
    int group;
    double theta;
    double gamma;
    double rate;
    bool unsaturated;
    bool has_slack;
  };
  std::vector<Entry> all;
  for (int g = 0; g < cluster.num_groups(); ++g) {
    const PicoGroup& group = cluster.group(g);
    for (size_t k = 0; k < group.users.size(); ++k) {
      const ClusterUser& u = group.users[k];
      Entry e{&u, g, fractions[g].theta[k], fractions[g].gamma[k], 0.0, false,
              false};
      e.rate = UserRate(u, e.theta, e.gamma);
      const double scale = 1.0 + std::abs(e.rate);
      e.unsaturated =
          IsInfinite(u.rate_max) || e.rate < u.rate_max - tol * scale;
      e.has_slack = e.rate > u.rate_min + tol * scale;
      all.push_back(e);
    }
  }
  // Shares below this count as zero.
  const double pos = tol;
  auto greater = [tol](double a, double b) {
    return a > b * (1.0 + tol) + tol * 1e-6;
  };
  std::vector<KktViolation> out;
  auto report = [&](int cond, const Entry& a, const Entry& b,
                    const std::string& what) {
    out.push_back({cond, a.u->user, b.u->user, what});
  };
  const bool any_unsaturated =
      std::any_of(all.begin(), all.end(), [](const Entry& e) {
        return e.unsaturated;
      });

  for (const Entry& k : all) {
    for (const Entry& j : all) {
      if (&k == &j) continue;
      const bool same = k.group == j.group;
      // Ratio-threshold exclusion: a user with the better pico/macro ratio
      // holds macro while a worse one holds pico.
      if (same && any_unsaturated &&
          greater(k.u->pico_macro_ratio(), j.u->pico_macro_ratio()) &&
          k.theta > pos && j.gamma > pos) {
        report(1, k, j, "macro share on higher-ratio user while lower-ratio "
                        "user holds pico share");
      }
      // Slack ordering inside a pico.
      if (same && j.has_slack && j.gamma > pos && k.unsaturated &&
          greater(k.u->weight * k.u->pico_rate, j.u->weight * j.u->pico_rate)) {
        report(2, k, j, "pico slack given to lower weighted pico rate user");
      }
      // Slack ordering over the macro.
      if (j.has_slack && j.theta > pos && k.unsaturated &&
          greater(k.u->weight * k.u->macro_rate,
                  j.u->weight * j.u->macro_rate)) {
        report(2, k, j, "macro slack given to lower weighted macro rate user");
      }
    }
  }

  // Cross-TP slope bounds.
  for (const Entry& k : all) {
    const double ratio = k.u->pico_macro_ratio();
    if (k.gamma > pos) {
      double best_pico = 0.0;
      const Entry* best_pico_user = nullptr;
      for (const Entry& j : all) {
        if (&j == &k || j.group != k.group || !j.unsaturated) continue;
        const double v = j.u->weight * j.u->pico_rate;
        if (v > best_pico) best_pico = v, best_pico_user = &j;
      }
      double worst_macro = kInfiniteRate;
      const Entry* worst_macro_user = nullptr;
      for (const Entry& j : all) {
        if (&j == &k || !(j.theta > pos) || !j.has_slack) continue;
        const double v = j.u->weight * j.u->macro_rate;
        if (v < worst_macro) worst_macro = v, worst_macro_user = &j;
      }
      if (best_pico_user != nullptr && worst_macro_user != nullptr &&
          greater(best_pico / worst_macro, ratio)) {
        report(3, k, *best_pico_user,
               "pico-held user ratio below pico/macro marginal bound");
      }
    }
    if (k.theta > pos) {
      double worst_pico = kInfiniteRate;
      const Entry* worst_pico_user = nullptr;
      for (const Entry& j : all) {
        if (&j == &k || j.group != k.group || !(j.gamma > pos) ||
            !j.has_slack) {
          continue;
        }
        const double v = j.u->weight * j.u->pico_rate;
        if (v < worst_pico) worst_pico = v, worst_pico_user = &j;
      }
      double best_macro = 0.0;
      const Entry* best_macro_user = nullptr;
      for (const Entry& j : all) {
        if (&j == &k || !j.unsaturated) continue;
        const double v = j.u->weight * j.u->macro_rate;
        if (v > best_macro) best_macro = v, best_macro_user = &j;
      }
      if (worst_pico_user != nullptr && best_macro_user != nullptr &&
          greater(ratio, worst_pico / best_macro)) {
        report(3, k, *worst_pico_user,
               "macro-held user ratio above pico/macro marginal bound");
      }
    }
  }
  return out;
}

}  // namespace hetnet
