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

#include "hetnet/pf_assoc.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetnet/pf_alloc.h"

namespace hetnet {
namespace {

double XLogX(int n) { return n > 0 ? n * std::log(static_cast<double>(n)) : 0.0; }

class ExactSearch {
 public:
  explicit ExactSearch(const NetworkInstance& inst)
      : inst_(inst), load_(inst.num_tps(), 0), tp_of_(inst.num_users(), -1),
        best_tp_of_(inst.num_users(), -1) {}

  SingleTpResult Run() {
    Recurse(0, 0.0);
    SingleTpResult out;
    out.tp_of = best_tp_of_;
    out.value = SingleTpPfObjective(inst_, best_tp_of_);
    out.pi = 0.0;
    return out;
  }

 private:
  void Recurse(UserIndex u, double log_rates) {
    if (u == inst_.num_users()) {
      double v = log_rates;
      for (int n : load_) v -= XLogX(n);
      if (v > best_) {
        best_ = v;
        best_tp_of_ = tp_of_;
      }
      return;
    }
    for (TpIndex tp = 0; tp < inst_.num_tps(); ++tp) {
      tp_of_[u] = tp;
      ++load_[tp];
      Recurse(u + 1, log_rates + std::log(inst_.peak_rate(u, tp)));
      --load_[tp];
    }
  }

  const NetworkInstance& inst_;
  std::vector<int> load_;
  std::vector<TpIndex> tp_of_;
  std::vector<TpIndex> best_tp_of_;
  double best_ = -std::numeric_limits<double>::infinity();
};

SingleTpResult BestResponse(const NetworkInstance& inst) {
  const int num_tps = inst.num_tps();
  std::vector<TpIndex> tp_of(inst.num_users());
  std::vector<int> load(num_tps, 0);
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    TpIndex best = 0;
    for (TpIndex tp = 1; tp < num_tps; ++tp) {
      if (inst.peak_rate(u, tp) > inst.peak_rate(u, best)) best = tp;
    }
    tp_of[u] = best;
    ++load[best];
  }
  auto log_rate = [&](UserIndex u, TpIndex tp) { return std::log(inst.peak_rate(u, tp)); };
  for (bool moved = true; moved;) {
    moved = false;
    for (UserIndex u = 0; u < inst.num_users(); ++u) {
      const TpIndex a = tp_of[u];
      const double leave = log_rate(u, a) -
                           (XLogX(load[a]) - XLogX(load[a] - 1));
      TpIndex best = a;
      double best_gain = 0.0;
      for (TpIndex b = 0; b < num_tps; ++b) {
        if (b == a) continue;
        const double join = log_rate(u, b) -
                            (XLogX(load[b] + 1) - XLogX(load[b]));
        const double gain = join - leave;
        if (gain > best_gain + 1e-12) best = b, best_gain = gain;
      }
      if (best != a) {
        --load[a];
        ++load[best];
        tp_of[u] = best;
        moved = true;
      }
    }
  }
  SingleTpResult out;
  out.tp_of = tp_of;
  out.value = SingleTpPfObjective(inst, tp_of);
  return out;
}

}  // namespace

double SingleTpPfObjective(const NetworkInstance& inst,
                           std::span<const TpIndex> tp_of) {
  std::vector<int> load(inst.num_tps(), 0);
  double v = 0.0;
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    if (static_cast<size_t>(u) >= tp_of.size() || tp_of[u] < 0) {
      throw std::invalid_argument("unassigned user");
    }
    v += std::log(inst.peak_rate(u, tp_of[u]));
    ++load[tp_of[u]];
  }
  for (int n : load) v -= XLogX(n);
  return v;
}

SingleTpResult SingleTpPfSolve(const NetworkInstance& inst,
                               const SingleTpChoice& choice) {
  if (choice.mode == SingleTpMode::kExact) {
    const double count =
        std::pow(static_cast<double>(inst.num_tps()), inst.num_users());
    if (count > 2e7) throw std::invalid_argument("too large for exact");
    return ExactSearch(inst).Run();
  }
  return BestResponse(inst);
}

TpIndex StrongestPico(const NetworkInstance& inst, UserIndex user,
                      TpIndex macro) {
  const auto picos = inst.picos_of(macro);
  if (picos.empty()) throw std::invalid_argument("macro without picos");
  TpIndex best = picos[0];
  for (TpIndex b : picos) {
    const bool better = inst.has_rx_power()
                            ? inst.rx_power_dbm(user, b) > inst.rx_power_dbm(user, best)
                            : inst.peak_rate(user, b) > inst.peak_rate(user, best);
    if (better) best = b;
  }
  return best;
}

OspaResult Ospa(const NetworkInstance& inst, const SingleTpChoice& choice) {
  for (TpIndex m : inst.macros()) {
    if (inst.picos_of(m).empty()) throw std::invalid_argument("macro without picos");
  }
  OspaResult out;
  out.stage1 = SingleTpPfSolve(inst, choice);
  out.association = Association(inst.num_users());
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const TpIndex tp = out.stage1.tp_of[u];
    if (inst.is_macro(tp)) {
      out.association.Assign(u, {tp, StrongestPico(inst, u, tp)});
    } else {
      out.association.Assign(u, {inst.macro_of(tp), tp});
    }
  }
  PfNetworkSolution sol = PfAllocate(inst, out.association);
  out.fractions = std::move(sol.fractions);
  out.value = sol.objective;
  return out;
}

}  // namespace hetnet
