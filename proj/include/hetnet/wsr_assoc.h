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

// Weighted-sum-rate association as set-function maximization over ground
// tuples (user, pico). A set of tuples with distinct users is valued by the
// sum over macros of the optimal cluster value with unit budgets; a set is
// usable only if every macro slice is feasible. GELS runs a (lazy) greedy
// stage followed by a swap/delete/add local search, then repeats both on the
// unused tuples and keeps the better of the two results.

#ifndef HETNET_WSR_ASSOC_H_
#define HETNET_WSR_ASSOC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hetnet/net_model.h"
#include "hetnet/wsr_alloc.h"

namespace hetnet {

// The cluster of `macro` formed by the tuples in `slice` (all of that
// macro), with unit budgets.
ClusterProblem ClusterFromTuples(const NetworkInstance& inst,
                                 const GroundSet& ground, TpIndex macro,
                                 std::span<const int> slice);

// Value of a tuple set; nullopt if some macro slice is infeasible. Throws
// std::invalid_argument("not in I") if a user appears twice.
std::optional<double> FWsr(const NetworkInstance& inst, const GroundSet& ground,
                           std::span<const int> tuples);

// Memoized per-macro slice values.
class SetFunctionCache {
 public:
  SetFunctionCache(const NetworkInstance& inst, const GroundSet& ground,
                   size_t max_entries = size_t{1} << 18);

  // `slice` must be sorted and contain only tuples of `macro`.
  std::optional<double> MacroValue(TpIndex macro, const std::vector<int>& slice);
  // Whole-set value; same contract as FWsr.
  std::optional<double> Evaluate(std::span<const int> tuples);

  int64_t hits() const { return hits_; }
  int64_t misses() const { return misses_; }

 private:
  const NetworkInstance& inst_;
  const GroundSet& ground_;
  size_t max_entries_;
  size_t entries_ = 0;
  std::vector<std::map<std::vector<int>, std::optional<double>>> memo_;
  int64_t hits_ = 0;
  int64_t misses_ = 0;
};

// Each macro alone can carry twice the minimum rates of every user that has
// a tuple in its cluster. With `candidates` given, only those tuples count.
bool CheckAdmissionControl(const NetworkInstance& inst, const GroundSet& ground);
bool CheckAdmissionControl(const NetworkInstance& inst, const GroundSet& ground,
                           std::span<const int> candidates);

struct GelsParams {
  // 0 selects the default of 50 * |ground|; negative means unlimited.
  int64_t max_iter = 0;
  double epsilon = 0.5;
  bool run_greedy_stage = true;
  bool lazy_greedy = true;
  bool rerun_on_complement = true;
};

enum class MoveKind { kAdd, kDelete, kSwap };

struct GelsMove {
  MoveKind kind = MoveKind::kAdd;
  int tuple_in = -1;   // added tuple (kAdd, kSwap)
  int tuple_out = -1;  // removed tuple (kDelete, kSwap)
  double gain = 0.0;
  double value_after = 0.0;
};

struct GelsResult {
  std::vector<int> tuples;  // sorted ground indices
  Association association;
  double value = 0.0;
  double greedy_value = 0.0;  // greedy-stage output of the primary run
  double primary_value = 0.0;
  double alternate_value = 0.0;
  int64_t iterations = 0;  // local-search iterations over both runs
  std::vector<GelsMove> trace;  // accepted local-search moves, in order
  bool guarantee_applies = false;  // admission control holds on the input
};

GelsResult Gels(const NetworkInstance& inst, const GroundSet& ground,
                const GelsParams& params);
// Restricted to the tuples in `candidates`.
GelsResult Gels(const NetworkInstance& inst, const GroundSet& ground,
                const GelsParams& params, std::span<const int> candidates);

// Splits the ground set by coordination cluster: each user keeps only the
// tuples of the cluster holding its best macro (highest peak rate, ties by
// smallest index). `cluster_of_macro` is indexed by position in
// inst.macros().
std::vector<std::vector<int>> PartitionGround(
    const NetworkInstance& inst, const GroundSet& ground,
    std::span<const int> cluster_of_macro);

// Runs GELS on each part independently and merges the results.
GelsResult GelsPartitioned(const NetworkInstance& inst, const GroundSet& ground,
                           const GelsParams& params,
                           const std::vector<std::vector<int>>& parts);

struct WsrNetworkSolution {
  AllocationFractions fractions;
  double value = 0.0;
};

// Optimal per-macro allocation for an association (unassociated users get
// nothing). Throws InfeasibleError if some macro is infeasible.
WsrNetworkSolution WsrAllocate(const NetworkInstance& inst,
                               const Association& assoc);

}  // namespace hetnet

#endif  // HETNET_WSR_ASSOC_H_
