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

#include "hetnet/net_model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace hetnet {
namespace {

// Users of the pair (macro, pico) whose macro/pico rate ratio coincides
// with another user's. Only positive rates are considered.
std::vector<std::pair<UserIndex, UserIndex>> FindTies(
    const NetworkInstance& inst, TpIndex macro, TpIndex pico) {
  std::vector<std::pair<double, UserIndex>> ratios;
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const double rm = inst.peak_rate(u, macro);
    const double rb = inst.peak_rate(u, pico);
    if (rm > 0 && rb > 0) ratios.emplace_back(rm / rb, u);
  }
  std::sort(ratios.begin(), ratios.end());
  std::vector<std::pair<UserIndex, UserIndex>> ties;
  for (size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i].first == ratios[i - 1].first) {
      ties.emplace_back(ratios[i - 1].second, ratios[i].second);
    }
  }
  return ties;
}

}  // namespace

std::string ToString(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNonPositivePeakRate:
      return "non-positive peak rate";
    case ViolationKind::kTiedRatio:
      return "tied ratio";
    case ViolationKind::kOrphanPico:
      return "orphan pico";
    case ViolationKind::kDuplicateId:
      return "duplicate id";
    case ViolationKind::kUnknownId:
      return "unknown id";
    case ViolationKind::kMinAboveMax:
      return "min rate above max rate";
    case ViolationKind::kNonPositiveWeight:
      return "non-positive weight";
    case ViolationKind::kNegativeMinRate:
      return "negative min rate";
  }
  return "unknown";
}

namespace {

// Structural checks shared by the constructor (which throws) and
// ValidateSpec (which reports).
std::vector<Violation> StructuralViolations(const NetworkSpec& spec) {
  std::vector<Violation> out;
  std::set<int64_t> user_ids;
  for (const UserSpec& u : spec.users) {
    if (!user_ids.insert(u.id).second) {
      out.push_back({ViolationKind::kDuplicateId,
                     "user id " + std::to_string(u.id) + " repeated"});
    }
  }
  std::set<int64_t> tp_ids;
  for (const MacroSpec& m : spec.macros) {
    if (!tp_ids.insert(m.id).second) {
      out.push_back({ViolationKind::kDuplicateId,
                     "TP id " + std::to_string(m.id) + " repeated"});
    }
  }
  for (const MacroSpec& m : spec.macros) {
    for (int64_t b : m.picos) {
      if (!tp_ids.insert(b).second) {
        out.push_back({ViolationKind::kOrphanPico,
                       "pico " + std::to_string(b) +
                           " is not attached to exactly one macro"});
      }
    }
  }
  for (const PeakRateEntry& e : spec.peak_rates) {
    if (!user_ids.contains(e.user)) {
      out.push_back({ViolationKind::kUnknownId,
                     "peak rate for unknown user " + std::to_string(e.user)});
    }
    if (!tp_ids.contains(e.tp)) {
      out.push_back({ViolationKind::kOrphanPico,
                     "peak rate for TP " + std::to_string(e.tp) +
                         " which is attached to no macro"});
    }
  }
  for (const RxPowerEntry& e : spec.rx_power_dbm) {
    if (!user_ids.contains(e.user) || !tp_ids.contains(e.tp)) {
      out.push_back({ViolationKind::kUnknownId,
                     "received power entry names an unknown user or TP"});
    }
  }
  return out;
}

}  // namespace

NetworkInstance::NetworkInstance(const NetworkSpec& spec) {
  if (auto structural = StructuralViolations(spec); !structural.empty()) {
    throw InvalidInstanceError(structural.front().message);
  }
  std::vector<UserSpec> users = spec.users;
  std::sort(users.begin(), users.end(),
            [](const UserSpec& a, const UserSpec& b) { return a.id < b.id; });
  std::map<int64_t, UserIndex> user_index;
  for (const UserSpec& u : users) {
    user_index[u.id] = static_cast<UserIndex>(user_ids_.size());
    user_ids_.push_back(u.id);
    weight_.push_back(u.weight);
    rate_min_.push_back(u.rate_min);
    rate_max_.push_back(u.rate_max);
  }

  std::map<int64_t, int64_t> owner;  // TP id -> macro id
  for (const MacroSpec& m : spec.macros) {
    owner[m.id] = m.id;
    for (int64_t b : m.picos) owner[b] = m.id;
  }
  std::map<int64_t, TpIndex> tp_index;
  for (const auto& [id, unused] : owner) {
    tp_index[id] = static_cast<TpIndex>(tp_ids_.size());
    tp_ids_.push_back(id);
  }
  macro_of_.resize(tp_ids_.size());
  picos_of_.resize(tp_ids_.size());
  for (const auto& [id, macro_id] : owner) {
    const TpIndex tp = tp_index[id];
    macro_of_[tp] = tp_index[macro_id];
    if (id == macro_id) {
      macros_.push_back(tp);
    } else {
      picos_.push_back(tp);
      picos_of_[tp_index[macro_id]].push_back(tp);
    }
  }

  peak_rate_.assign(user_ids_.size() * tp_ids_.size(), 0.0);
  for (const PeakRateEntry& e : spec.peak_rates) {
    set_peak_rate(user_index[e.user], tp_index[e.tp], e.rate);
  }
  if (!spec.rx_power_dbm.empty()) {
    rx_power_dbm_.assign(user_ids_.size() * tp_ids_.size(),
                         -std::numeric_limits<double>::infinity());
    for (const RxPowerEntry& e : spec.rx_power_dbm) {
      rx_power_dbm_[static_cast<size_t>(user_index[e.user]) * num_tps() +
                    tp_index[e.tp]] = e.dbm;
    }
  }
}

std::optional<UserIndex> NetworkInstance::FindUser(int64_t id) const {
  auto it = std::lower_bound(user_ids_.begin(), user_ids_.end(), id);
  if (it == user_ids_.end() || *it != id) return std::nullopt;
  return static_cast<UserIndex>(it - user_ids_.begin());
}

std::optional<TpIndex> NetworkInstance::FindTp(int64_t id) const {
  auto it = std::lower_bound(tp_ids_.begin(), tp_ids_.end(), id);
  if (it == tp_ids_.end() || *it != id) return std::nullopt;
  return static_cast<TpIndex>(it - tp_ids_.begin());
}

NetworkSpec NetworkInstance::ToSpec() const {
  NetworkSpec spec;
  for (UserIndex u = 0; u < num_users(); ++u) {
    spec.users.push_back({user_ids_[u], weight_[u], rate_min_[u], rate_max_[u]});
  }
  for (TpIndex m : macros_) {
    MacroSpec ms{tp_ids_[m], {}};
    for (TpIndex b : picos_of_[m]) ms.picos.push_back(tp_ids_[b]);
    spec.macros.push_back(std::move(ms));
  }
  for (UserIndex u = 0; u < num_users(); ++u) {
    for (TpIndex tp = 0; tp < num_tps(); ++tp) {
      spec.peak_rates.push_back({user_ids_[u], tp_ids_[tp], peak_rate(u, tp)});
    }
  }
  if (has_rx_power()) {
    for (UserIndex u = 0; u < num_users(); ++u) {
      for (TpIndex tp = 0; tp < num_tps(); ++tp) {
        spec.rx_power_dbm.push_back(
            {user_ids_[u], tp_ids_[tp], rx_power_dbm(u, tp)});
      }
    }
  }
  return spec;
}

std::vector<Violation> ValidateSpec(const NetworkSpec& spec) {
  std::vector<Violation> out = StructuralViolations(spec);
  if (!out.empty()) return out;
  return ValidateInstance(NetworkInstance(spec));
}

std::vector<Violation> ValidateInstance(const NetworkInstance& inst) {
  std::vector<Violation> out;
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const std::string uname = "user " + std::to_string(inst.user_id(u));
    if (!(inst.weight(u) > 0)) {
      out.push_back({ViolationKind::kNonPositiveWeight, uname});
    }
    if (!(inst.rate_min(u) >= 0)) {
      out.push_back({ViolationKind::kNegativeMinRate, uname});
    }
    if (inst.rate_min(u) > inst.rate_max(u) || !(inst.rate_max(u) > 0)) {
      out.push_back({ViolationKind::kMinAboveMax, uname});
    }
    for (TpIndex tp = 0; tp < inst.num_tps(); ++tp) {
      const double r = inst.peak_rate(u, tp);
      if (!(r > 0) || !std::isfinite(r)) {
        out.push_back({ViolationKind::kNonPositivePeakRate,
                       uname + " at TP " + std::to_string(inst.tp_id(tp))});
      }
    }
  }
  for (TpIndex m : inst.macros()) {
    for (TpIndex b : inst.picos_of(m)) {
      for (const auto& [a, c] : FindTies(inst, m, b)) {
        std::ostringstream msg;
        msg << "users " << inst.user_id(a) << " and " << inst.user_id(c)
            << " share a macro/pico ratio at pico " << inst.tp_id(b);
        out.push_back({ViolationKind::kTiedRatio, msg.str()});
      }
    }
  }
  return out;
}

int BreakRatioTies(NetworkInstance& inst, double relative_jitter) {
  int perturbed = 0;
  for (TpIndex m : inst.macros()) {
    for (TpIndex b : inst.picos_of(m)) {
      for (int round = 1;; ++round) {
        auto ties = FindTies(inst, m, b);
        if (ties.empty()) break;
        for (const auto& tie : ties) {
          const UserIndex u = tie.second;
          inst.set_peak_rate(u, b,
                             inst.peak_rate(u, b) * (1.0 + relative_jitter * round));
          ++perturbed;
        }
      }
    }
  }
  return perturbed;
}

int Association::num_assigned() const {
  return static_cast<int>(
      std::count_if(links_.begin(), links_.end(),
                    [](const auto& l) { return l.has_value(); }));
}

void CheckAssociation(const NetworkInstance& inst, const Association& assoc) {
  if (assoc.num_users() != inst.num_users()) {
    throw std::invalid_argument("association size does not match instance");
  }
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const auto& link = assoc.link(u);
    if (!link) continue;
    if (link->macro < 0 || link->macro >= inst.num_tps() ||
        !inst.is_macro(link->macro) || link->pico < 0 ||
        link->pico >= inst.num_tps() || inst.is_macro(link->pico) ||
        inst.macro_of(link->pico) != link->macro) {
      throw std::invalid_argument("user " + std::to_string(inst.user_id(u)) +
                                  " is linked to a pico outside its macro");
    }
  }
}

UserRates ComputeUserRates(const NetworkInstance& inst,
                           const Association& assoc,
                           const AllocationFractions& fractions) {
  UserRates rates(inst.num_users(), 0.0);
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const auto& link = assoc.link(u);
    if (!link) continue;
    rates[u] = inst.peak_rate(u, link->macro) * fractions.theta[u] +
               inst.peak_rate(u, link->pico) * fractions.gamma[u];
  }
  return rates;
}

double MaxBudgetExcess(const NetworkInstance& inst, const Association& assoc,
                       const AllocationFractions& fractions) {
  std::vector<double> load(inst.num_tps(), 0.0);
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const auto& link = assoc.link(u);
    if (!link) continue;
    load[link->macro] += fractions.theta[u];
    load[link->pico] += fractions.gamma[u];
  }
  double excess = 0.0;
  for (double l : load) excess = std::max(excess, l - 1.0);
  return excess;
}

GroundSet::GroundSet(const NetworkInstance& inst)
    : by_macro_(inst.num_tps()), by_user_(inst.num_users()) {
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    for (TpIndex b : inst.picos()) {
      const TpIndex m = inst.macro_of(b);
      if (inst.peak_rate(u, m) + inst.peak_rate(u, b) >= inst.rate_min(u)) {
        const int idx = static_cast<int>(tuples_.size());
        tuples_.push_back({u, b, m});
        by_macro_[m].push_back(idx);
        by_user_[u].push_back(idx);
      }
    }
  }
}

std::optional<int> GroundSet::Find(UserIndex u, TpIndex pico) const {
  for (int idx : by_user_[u]) {
    if (tuples_[idx].pico == pico) return idx;
  }
  return std::nullopt;
}

Association AssociationFromTuples(const NetworkInstance& inst,
                                  const GroundSet& ground,
                                  std::span<const int> tuple_indices) {
  Association assoc(inst.num_users());
  for (int idx : tuple_indices) {
    const GroundTuple& t = ground[idx];
    if (assoc.IsAssigned(t.user)) {
      throw std::invalid_argument("user " + std::to_string(inst.user_id(t.user)) +
                                  " appears in two tuples");
    }
    assoc.Assign(t.user, {t.macro, t.pico});
  }
  return assoc;
}

}  // namespace hetnet
