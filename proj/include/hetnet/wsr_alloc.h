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

// Optimal weighted-sum-rate allocation fractions inside one macro cluster
// for a fixed association.
//
// For every pico b with associated users, the best value as a function of
// the macro share Z_b handed to b is concave and piecewise linear. Its slope
// curve is built by starting from the cheapest way of meeting all minimum
// rates and then spending additional macro resource on whichever user gives
// the largest marginal weighted rate: either directly (macro slack) or by
// moving the boundary user's pico share to the macro, which frees pico
// resource for a user that is better served by the pico. The cluster
// optimum then follows by greedily handing the macro budget to the pico
// whose curve currently has the steepest slope.

#ifndef HETNET_WSR_ALLOC_H_
#define HETNET_WSR_ALLOC_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetnet/net_model.h"

namespace hetnet {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerance (resource units) for "user reached its max rate" and "boundary
// user exhausted its pico share".
inline constexpr double kResourceTol = 1e-12;

struct ClusterUser {
  UserIndex user = -1;
  double weight = 1.0;
  double macro_rate = 1.0;
  double pico_rate = 1.0;
  double rate_min = 0.0;
  double rate_max = kInfiniteRate;

  // Larger means relatively better served by the pico.
  double pico_macro_ratio() const { return pico_rate / macro_rate; }
};

struct PicoGroup {
  TpIndex pico = -1;
  double budget = 1.0;
  // Sorted by decreasing pico/macro ratio (ties by user index) once the group
  // is part of a ClusterProblem.
  std::vector<ClusterUser> users;
};

// Sorts a group's users into the labeling the slope construction relies on.
void LabelUsers(PicoGroup& group);

class ClusterProblem {
 public:
  ClusterProblem() = default;
  // Groups without users are dropped; the rest are labeled and sorted by pico.
  ClusterProblem(TpIndex macro, double macro_budget,
                 std::vector<PicoGroup> groups);

  // The cluster of `macro` under `assoc`, with unit budgets.
  static ClusterProblem FromAssociation(const NetworkInstance& inst,
                                        TpIndex macro,
                                        const Association& assoc);

  TpIndex macro() const { return macro_; }
  double macro_budget() const { return macro_budget_; }
  void set_macro_budget(double g) { macro_budget_ = g; }
  std::span<const PicoGroup> groups() const { return groups_; }
  const PicoGroup& group(int g) const { return groups_[g]; }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  void set_pico_budget(int g, double budget) { groups_[g].budget = budget; }
  int num_users() const;

 private:
  TpIndex macro_ = -1;
  double macro_budget_ = 1.0;
  std::vector<PicoGroup> groups_;
};

struct SlopeSegment {
  double width = 0.0;
  double slope = 0.0;
};

// Non-increasing step function of a resource amount, together with the
// value of its integral: value(z) = start_value + integral from start to z.
class SlopeCurve {
 public:
  SlopeCurve() = default;
  SlopeCurve(double start, double start_value)
      : start_(start), start_value_(start_value) {}

  double start() const { return start_; }
  double start_value() const { return start_value_; }
  double end() const;
  std::span<const SlopeSegment> segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  // Appends a segment; equal consecutive slopes are merged and empty widths
  // dropped.
  void Append(double width, double slope);

  // Value at z (clamped to [start, end]).
  double ValueAt(double z) const;
  // Right derivative at z; zero at or beyond end().
  double SlopeAt(double z) const;
  // start, start + w0, start + w0 + w1, ...
  std::vector<double> Breakpoints() const;

  // "breakpoint,slope" rows, one per segment, with a header line.
  std::string ToCsv() const;

 private:
  double start_ = 0.0;
  double start_value_ = 0.0;
  std::vector<SlopeSegment> segments_;
};

// Minimum macro resource needed to meet every minimum rate of the group when
// the pico contributes at most gamma_b. May exceed one.
double MinMacroNeed(const PicoGroup& group, double gamma_b);

// Minimum pico resource needed to meet every minimum rate of the group when
// the macro contributes at most z_b.
double MinPicoNeed(const PicoGroup& group, double z_b);

// Weighted rate earned by spending the pico resource left after the minimum
// rates are met (zero when the pico alone cannot meet them).
double SlackValue(const PicoGroup& group, double gamma_b);

// Slope curve of the group's optimal value over Z_b in [MinMacroNeed, z_cap].
// Throws std::invalid_argument for a group without users.
SlopeCurve PicoSlopeCurve(const PicoGroup& group, double gamma_b,
                          double z_cap = 1.0);

struct PicoSolution {
  double value = 0.0;
  GroupFractions fractions;
};

// Optimal value and shares for one pico given macro share z_b. Throws
// InfeasibleError if z_b is below MinMacroNeed(group, gamma_b).
PicoSolution SolveSinglePico(const PicoGroup& group, double z_b,
                             double gamma_b);

// True iff every minimum rate can be met within the budgets.
bool FeasibilityCheck(const ClusterProblem& cluster);

struct ClusterSolution {
  double value = 0.0;
  // Macro share handed to each group.
  std::vector<double> macro_share;
  ClusterFractions fractions;
  // Slope curve of the cluster value over the macro budget, starting at the
  // summed minimum macro need.
  SlopeCurve curve;
};

// Throws InfeasibleError when the summed minimum macro need exceeds the
// macro budget.
ClusterSolution Algorithm1Allocate(const ClusterProblem& cluster);

// Weighted sum rate of arbitrary shares.
double WeightedSumRate(const ClusterProblem& cluster,
                       const ClusterFractions& fractions);

// Writes cluster shares into network-wide per-user fractions.
void ScatterFractions(const ClusterProblem& cluster,
                      const ClusterFractions& fractions,
                      AllocationFractions& out);

struct KktViolation {
  // 1: ratio-threshold exclusion, 2: slack ordering, 3: cross-TP slope bound.
  int condition = 0;
  UserIndex user_a = -1;
  UserIndex user_b = -1;
  std::string detail;
};

// Checks the necessary optimality conditions on a feasible allocation; an
// empty result means all of them hold within `tol` (relative).
std::vector<KktViolation> VerifyKktWsr(const ClusterProblem& cluster,
                                       const ClusterFractions& fractions,
                                       double tol = 1e-8);

}  // namespace hetnet

#endif  // HETNET_WSR_ALLOC_H_
