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

#include "hetnet/wsr_assoc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hetnet {

ClusterProblem ClusterFromTuples(const NetworkInstance& inst,
                                 const GroundSet& ground, TpIndex macro,
                                 std::span<const int> slice) {
  std::vector<PicoGroup> groups;
  for (int idx : slice) {
    const GroundTuple& t = ground[idx];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const PicoGroup& g) { return g.pico == t.pico; });
    if (it == groups.end()) {
      groups.push_back({t.pico, 1.0, {}});
      it = groups.end() - 1;
    }
    it->users.push_back({t.user, inst.weight(t.user),
                         inst.peak_rate(t.user, macro),
                         inst.peak_rate(t.user, t.pico), inst.rate_min(t.user),
                         inst.rate_max(t.user)});
  }
  return ClusterProblem(macro, 1.0, std::move(groups));
}

namespace {

std::optional<double> SliceValue(const NetworkInstance& inst,
                                 const GroundSet& ground, TpIndex macro,
                                 std::span<const int> slice) {
  if (slice.empty()) return 0.0;
  const ClusterProblem cluster = ClusterFromTuples(inst, ground, macro, slice);
  if (!FeasibilityCheck(cluster)) return std::nullopt;
  return Algorithm1Allocate(cluster).value;
}

// Per-macro sorted slices of a tuple set; throws on a repeated user.
std::vector<std::vector<int>> SplitByMacro(const NetworkInstance& inst,
                                           const GroundSet& ground,
                                           std::span<const int> tuples) {
  std::vector<char> seen(inst.num_users(), 0);
  std::vector<std::vector<int>> slices(inst.num_tps());
  for (int idx : tuples) {
    const GroundTuple& t = ground[idx];
    if (seen[t.user]) throw std::invalid_argument("not in I");
    seen[t.user] = 1;
    slices[t.macro].push_back(idx);
  }
  for (auto& s : slices) std::sort(s.begin(), s.end());
  return slices;
}

}  // namespace

std::optional<double> FWsr(const NetworkInstance& inst, const GroundSet& ground,
                           std::span<const int> tuples) {
  const auto slices = SplitByMacro(inst, ground, tuples);
  double total = 0.0;
  for (TpIndex m : inst.macros()) {
    const auto v = SliceValue(inst, ground, m, slices[m]);
    if (!v) return std::nullopt;
    total += *v;
  }
  return total;
}

SetFunctionCache::SetFunctionCache(const NetworkInstance& inst,
                                   const GroundSet& ground, size_t max_entries)
    : inst_(inst), ground_(ground), max_entries_(max_entries),
      memo_(inst.num_tps()) {}

std::optional<double> SetFunctionCache::MacroValue(
    TpIndex macro, const std::vector<int>& slice) {
  auto& memo = memo_[macro];
  if (auto it = memo.find(slice); it != memo.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  const auto v = SliceValue(inst_, ground_, macro, slice);
  if (entries_ >= max_entries_) {
    for (auto& m : memo_) m.clear();
    entries_ = 0;
  }
  memo.emplace(slice, v);
  ++entries_;
  return v;
}

std::optional<double> SetFunctionCache::Evaluate(std::span<const int> tuples) {
  const auto slices = SplitByMacro(inst_, ground_, tuples);
  double total = 0.0;
  for (TpIndex m : inst_.macros()) {
    const auto v = MacroValue(m, slices[m]);
    if (!v) return std::nullopt;
    total += *v;
  }
  return total;
}

bool CheckAdmissionControl(const NetworkInstance& inst,
                           const GroundSet& ground) {
  std::vector<int> all(ground.size());
  for (int i = 0; i < ground.size(); ++i) all[i] = i;
  return CheckAdmissionControl(inst, ground, all);
}

bool CheckAdmissionControl(const NetworkInstance& inst, const GroundSet& ground,
                           std::span<const int> candidates) {
  std::vector<std::vector<char>> present(inst.num_tps());
  for (int idx : candidates) {
    const GroundTuple& t = ground[idx];
    if (present[t.macro].empty()) present[t.macro].assign(inst.num_users(), 0);
    present[t.macro][t.user] = 1;
  }
  for (TpIndex m : inst.macros()) {
    if (present[m].empty()) continue;
    double load = 0.0;
    for (UserIndex u = 0; u < inst.num_users(); ++u) {
      if (present[m][u]) load += 2.0 * inst.rate_min(u) / inst.peak_rate(u, m);
    }
    if (load > 1.0 + 1e-12) return false;
  }
  return true;
}

namespace {

struct StageResult {
  std::vector<int> tuples;
  double value = 0.0;
  double greedy_value = 0.0;
  int64_t iterations = 0;
  std::vector<GelsMove> trace;
};

class GelsRunner {
 public:
  GelsRunner(const NetworkInstance& inst, const GroundSet& ground,
             SetFunctionCache& cache, const GelsParams& params, double delta,
             int64_t max_iter)
      : inst_(inst), ground_(ground), cache_(cache), params_(params),
        delta_(delta), max_iter_(max_iter) {}

  StageResult Run(const std::vector<int>& allowed) {
    slices_.assign(inst_.num_tps(), {});
    macro_value_.assign(inst_.num_tps(), 0.0);
    macro_version_.assign(inst_.num_tps(), 0);
    user_tuple_.assign(inst_.num_users(), -1);
    in_set_.assign(ground_.size(), 0);
    value_ = 0.0;
    allowed_ = allowed;

    StageResult out;
    if (params_.run_greedy_stage) {
      if (params_.lazy_greedy) {
        LazyGreedy();
      } else {
        EagerGreedy();
      }
    }
    out.greedy_value = value_;
    LocalSearch(out);
    for (int idx = 0; idx < ground_.size(); ++idx) {
      if (in_set_[idx]) out.tuples.push_back(idx);
    }
    out.value = value_;
    return out;
  }

 private:
  const GroundTuple& T(int idx) const { return ground_[idx]; }

  // Value of macro m's slice with `out` removed and `in` added (-1 = none).
  std::optional<double> Modified(TpIndex m, int out, int in) {
    std::vector<int> s;
    s.reserve(slices_[m].size() + 1);
    for (int idx : slices_[m]) {
      if (idx != out) s.push_back(idx);
    }
    if (in >= 0) s.insert(std::lower_bound(s.begin(), s.end(), in), in);
    return cache_.MacroValue(m, s);
  }

  void Apply(int out, int in) {
    if (out >= 0) {
      const GroundTuple& t = T(out);
      auto& s = slices_[t.macro];
      s.erase(std::find(s.begin(), s.end(), out));
      in_set_[out] = 0;
      user_tuple_[t.user] = -1;
    }
    if (in >= 0) {
      const GroundTuple& t = T(in);
      auto& s = slices_[t.macro];
      s.insert(std::lower_bound(s.begin(), s.end(), in), in);
      in_set_[in] = 1;
      user_tuple_[t.user] = in;
    }
    for (int idx : {out, in}) {
      if (idx < 0) continue;
      const TpIndex m = T(idx).macro;
      macro_value_[m] = *cache_.MacroValue(m, slices_[m]);
      ++macro_version_[m];
    }
    value_ = 0.0;
    for (TpIndex m : inst_.macros()) value_ += macro_value_[m];
  }

  double Threshold() const {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + std::abs(value_));
    return std::max(delta_ * value_, floor);
  }

  void EagerGreedy() {
    while (true) {
      int best = -1;
      double best_gain = 0.0;
      for (int idx : allowed_) {
        if (in_set_[idx] || user_tuple_[T(idx).user] >= 0) continue;
        const TpIndex m = T(idx).macro;
        const auto v = Modified(m, -1, idx);
        if (!v) continue;
        const double gain = *v - macro_value_[m];
        if (best < 0 || gain > best_gain) best = idx, best_gain = gain;
      }
      if (best < 0 || !(best_gain > 0.0)) return;
      Apply(-1, best);
    }
  }

  void LazyGreedy() {
    struct Entry {
      double gain;
      int idx;
      int64_t version;
      bool operator<(const Entry& o) const {
        // priority_queue pops the largest: highest gain, then smallest index.
        if (gain != o.gain) return gain < o.gain;
        return idx > o.idx;
      }
    };
    std::priority_queue<Entry> pq;
    for (int idx : allowed_) {
      const TpIndex m = T(idx).macro;
      const auto v = Modified(m, -1, idx);
      if (v) pq.push({*v - macro_value_[m], idx, macro_version_[m]});
    }
    while (!pq.empty()) {
      Entry top = pq.top();
      pq.pop();
      if (user_tuple_[T(top.idx).user] >= 0) continue;
      const TpIndex m = T(top.idx).macro;
      if (top.version == macro_version_[m]) {
        if (!(top.gain > 0.0)) return;
        Apply(-1, top.idx);
        continue;
      }
      // Adding users never makes an infeasible slice feasible again.
      const auto v = Modified(m, -1, top.idx);
      if (v) pq.push({*v - macro_value_[m], top.idx, macro_version_[m]});
    }
  }

  void LocalSearch(StageResult& out) {
    const double kNone = -std::numeric_limits<double>::infinity();
    std::vector<int> current;
    while (max_iter_ < 0 || out.iterations < max_iter_) {
      ++out.iterations;
      current.clear();
      for (int idx = 0; idx < ground_.size(); ++idx) {
        if (in_set_[idx]) current.push_back(idx);
      }
      // Deletion gains.
      std::vector<double> del(ground_.size(), kNone);
      for (int idx : current) {
        const TpIndex m = T(idx).macro;
        del[idx] = *Modified(m, idx, -1) - macro_value_[m];
      }
      // Addition gains wherever the user is absent from that macro's slice.
      std::vector<double> add(ground_.size(), kNone);
      std::vector<char> add_ok(ground_.size(), 0);
      for (int idx : allowed_) {
        if (in_set_[idx]) continue;
        const int held = user_tuple_[T(idx).user];
        if (held >= 0 && T(held).macro == T(idx).macro) continue;
        const TpIndex m = T(idx).macro;
        const auto v = Modified(m, -1, idx);
        if (v) {
          add[idx] = *v - macro_value_[m];
          add_ok[idx] = 1;
        }
      }

      GelsMove best_swap{MoveKind::kSwap, -1, -1, kNone, 0.0};
      for (int o : current) {
        for (int in : allowed_) {
          if (in_set_[in]) continue;
          const UserIndex u = T(in).user;
          if (u != T(o).user && user_tuple_[u] >= 0) continue;
          double gain;
          if (T(in).macro != T(o).macro) {
            if (!add_ok[in]) continue;
            gain = del[o] + add[in];
          } else {
            const auto v = Modified(T(o).macro, o, in);
            if (!v) continue;
            gain = *v - macro_value_[T(o).macro];
          }
          if (gain > best_swap.gain) {
            best_swap.gain = gain;
            best_swap.tuple_in = in;
            best_swap.tuple_out = o;
          }
        }
      }
      GelsMove best_del{MoveKind::kDelete, -1, -1, kNone, 0.0};
      for (int o : current) {
        if (del[o] > best_del.gain) best_del.gain = del[o], best_del.tuple_out = o;
      }
      GelsMove best_add{MoveKind::kAdd, -1, -1, kNone, 0.0};
      for (int in : allowed_) {
        if (!add_ok[in] || user_tuple_[T(in).user] >= 0) continue;
        if (add[in] > best_add.gain) best_add.gain = add[in], best_add.tuple_in = in;
      }
      GelsMove best = best_swap;
      if (best_del.gain > best.gain) best = best_del;
      if (best_add.gain > best.gain) best = best_add;
      if (best.gain == kNone || best.gain < Threshold()) break;
      Apply(best.tuple_out, best.tuple_in);
      best.value_after = value_;
      out.trace.push_back(best);
    }
  }

  const NetworkInstance& inst_;
  const GroundSet& ground_;
  SetFunctionCache& cache_;
  const GelsParams& params_;
  double delta_;
  int64_t max_iter_;

  std::vector<int> allowed_;
  std::vector<std::vector<int>> slices_;
  std::vector<double> macro_value_;
  std::vector<int64_t> macro_version_;
  std::vector<int> user_tuple_;
  std::vector<char> in_set_;
  double value_ = 0.0;
};

}  // namespace

GelsResult Gels(const NetworkInstance& inst, const GroundSet& ground,
                const GelsParams& params) {
  std::vector<int> all(ground.size());
  for (int i = 0; i < ground.size(); ++i) all[i] = i;
  return Gels(inst, ground, params, all);
}

GelsResult Gels(const NetworkInstance& inst, const GroundSet& ground,
                const GelsParams& params, std::span<const int> candidates) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  std::vector<int> omega(candidates.begin(), candidates.end());
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());

  GelsResult result;
  result.association = Association(inst.num_users());
  result.guarantee_applies = CheckAdmissionControl(inst, ground, omega);
  if (omega.empty()) return result;

  const double n = static_cast<double>(omega.size());
  const double delta = params.epsilon / (n * n * n * n);
  const int64_t max_iter =
      params.max_iter == 0 ? 50 * static_cast<int64_t>(omega.size()) : params.max_iter;

  SetFunctionCache cache(inst, ground);
  GelsRunner runner(inst, ground, cache, params, delta, max_iter);
  StageResult primary = runner.Run(omega);
  result.greedy_value = primary.greedy_value;
  result.primary_value = primary.value;
  result.iterations = primary.iterations;
  result.trace = primary.trace;
  StageResult chosen = primary;
  if (params.rerun_on_complement) {
    std::vector<int> rest;
    std::set_difference(omega.begin(), omega.end(), primary.tuples.begin(),
                        primary.tuples.end(), std::back_inserter(rest));
    StageResult alternate = runner.Run(rest);
    result.alternate_value = alternate.value;
    result.iterations += alternate.iterations;
    result.trace.insert(result.trace.end(), alternate.trace.begin(),
                        alternate.trace.end());
    if (alternate.value > primary.value) chosen = std::move(alternate);
  }
  result.tuples = std::move(chosen.tuples);
  result.value = chosen.value;
  result.association = AssociationFromTuples(inst, ground, result.tuples);
  return result;
}

std::vector<std::vector<int>> PartitionGround(
    const NetworkInstance& inst, const GroundSet& ground,
    std::span<const int> cluster_of_macro) {
  const auto macros = inst.macros();
  if (cluster_of_macro.size() != macros.size()) {
    throw std::invalid_argument("cluster map size differs from macro count");
  }
  std::vector<int> cluster_of_tp(inst.num_tps(), -1);
  int num_clusters = 0;
  for (size_t i = 0; i < macros.size(); ++i) {
    cluster_of_tp[macros[i]] = cluster_of_macro[i];
    num_clusters = std::max(num_clusters, cluster_of_macro[i] + 1);
  }
  std::vector<std::vector<int>> parts(num_clusters);
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    TpIndex best = macros[0];
    for (TpIndex m : macros) {
      if (inst.peak_rate(u, m) > inst.peak_rate(u, best)) best = m;
    }
    const int c = cluster_of_tp[best];
    for (int idx : ground.of_user(u)) {
      if (cluster_of_tp[ground[idx].macro] == c) parts[c].push_back(idx);
    }
  }
  return parts;
}

GelsResult GelsPartitioned(const NetworkInstance& inst, const GroundSet& ground,
                           const GelsParams& params,
                           const std::vector<std::vector<int>>& parts) {
  GelsResult merged;
  merged.guarantee_applies = true;
  for (const auto& part : parts) {
    GelsResult r = Gels(inst, ground, params, part);
    merged.tuples.insert(merged.tuples.end(), r.tuples.begin(), r.tuples.end());
    merged.value += r.value;
    merged.greedy_value += r.greedy_value;
    merged.primary_value += r.primary_value;
    merged.alternate_value += r.alternate_value;
    merged.iterations += r.iterations;
    merged.trace.insert(merged.trace.end(), r.trace.begin(), r.trace.end());
    merged.guarantee_applies = merged.guarantee_applies && r.guarantee_applies;
  }
  std::sort(merged.tuples.begin(), merged.tuples.end());
  merged.association = AssociationFromTuples(inst, ground, merged.tuples);
  return merged;
}

WsrNetworkSolution WsrAllocate(const NetworkInstance& inst,
                               const Association& assoc) {
  WsrNetworkSolution out;
  out.fractions = AllocationFractions(inst.num_users());
  for (TpIndex m : inst.macros()) {
    const ClusterProblem cluster = ClusterProblem::FromAssociation(inst, m, assoc);
    if (cluster.num_groups() == 0) continue;
    if (!FeasibilityCheck(cluster)) {
      throw InfeasibleError("infeasible cluster at macro " +
                            std::to_string(inst.tp_id(m)));
    }
    const ClusterSolution sol = Algorithm1Allocate(cluster);
    ScatterFractions(cluster, sol.fractions, out.fractions);
    out.value += sol.value;
  }
  return out;
}

}  // namespace hetnet
