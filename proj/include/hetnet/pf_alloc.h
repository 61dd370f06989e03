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

// Proportional-fair allocation inside one macro cluster for a fixed, full
// association, solved through the single macro-side dual variable lambda.
//
// Sorting the users of pico b by mu = R_macro / R_pico (ascending) gives a
// ladder mu_1 <= ... <= mu_N. For a given lambda every pico sits in one of
// two regimes:
//   A_m: (m-1) mu_m < lambda < m mu_m. The m-1 best pico users share the
//        pico, user m is served by both TPs, the rest by the macro only.
//   B_m: (m-1) mu_{m-1} <= lambda <= (m-1) mu_m. The m-1 best pico users
//        split the pico equally, the rest are macro-only.
// h(lambda, b) is the part of the macro-load expression N_b / lambda that
// pico b does not consume; the root of 1 + sum_b h = sum_b N_b / lambda is
// unique and found by bisection.

#ifndef HETNET_PF_ALLOC_H_
#define HETNET_PF_ALLOC_H_

#include <span>
#include <vector>

#include "hetnet/net_model.h"

namespace hetnet {

struct PfUser {
  UserIndex user = -1;
  double macro_rate = 1.0;
  double pico_rate = 1.0;
  double mu() const { return macro_rate / pico_rate; }
};

struct PfPicoGroup {
  TpIndex pico = -1;
  // Sorted by ascending mu (ties by user index) inside PfClusterProblem.
  std::vector<PfUser> users;
};

class PfClusterProblem {
 public:
  PfClusterProblem() = default;
  // Empty groups are dropped; users are sorted into ladder order.
  PfClusterProblem(TpIndex macro, std::vector<PfPicoGroup> groups);

  // Throws std::invalid_argument("unassociated user") if any user of the
  // instance lacks a link.
  static PfClusterProblem FromAssociation(const NetworkInstance& inst,
                                          TpIndex macro,
                                          const Association& assoc);

  TpIndex macro() const { return macro_; }
  std::span<const PfPicoGroup> groups() const { return groups_; }
  const PfPicoGroup& group(int g) const { return groups_[g]; }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  int num_users() const;
  // mu ladder of group g.
  const std::vector<double>& ladder(int g) const { return ladders_[g]; }

 private:
  TpIndex macro_ = -1;
  std::vector<PfPicoGroup> groups_;
  std::vector<std::vector<double>> ladders_;
};

enum class PfRegimeKind { kA, kB };

struct PfRegime {
  PfRegimeKind kind = PfRegimeKind::kA;
  int m = 1;  // 1-based, as in the ladder description above
  friend bool operator==(const PfRegime&, const PfRegime&) = default;
};

// Regime of a ladder (ascending mu) at lambda > 0. Interval endpoints are
// classified into the closed B intervals.
PfRegime ClassifyLambda(std::span<const double> ladder, double lambda);

double HOfLambda(std::span<const double> ladder, double lambda);
double GOfLambda(std::span<const double> ladder, double lambda);

// sum_b N_b / lambda - sum_b h(lambda, b) - 1; strictly decreasing in lambda.
double MacroLoadExcess(const PfClusterProblem& cluster, double lambda);

struct PfDualSolution {
  double lambda = 0.0;
  std::vector<PfRegime> regimes;  // per group
  ClusterFractions fractions;
  double objective = 0.0;
};

// Throws std::invalid_argument for an empty cluster.
PfDualSolution PfBisection(const PfClusterProblem& cluster,
                           double rel_tol = 1e-12);

// Sum of log rates of arbitrary shares.
double PfObjective(const PfClusterProblem& cluster,
                   const ClusterFractions& fractions);

struct PfKktReport {
  double lambda = 0.0;
  std::vector<double> beta;  // per group
  double stationarity = 0.0;  // relative
  double budget = 0.0;        // |sum of shares - 1|, worst TP
  double max_residual() const { return stationarity > budget ? stationarity : budget; }
};

// Reconstructs the multipliers from the shares and reports how far they are
// from satisfying the optimality conditions.
PfKktReport VerifyKktPf(const PfClusterProblem& cluster,
                        const ClusterFractions& fractions,
                        double share_tol = 1e-10);

enum class SplitMode {
  kExact,      // per-pico decomposition over macro-side counts
  kEnumerate,  // all 2^K splits; at most 20 users
  kHeuristic,  // single-user flips until no improvement
};

struct SplitSolution {
  // on_macro[g][k]: user k of group g served by the macro only.
  std::vector<std::vector<bool>> on_macro;
  double value = 0.0;
  // Equal shares on each TP; a feasible point with Sum log rates == value.
  ClusterFractions fractions;
};

// Throws std::invalid_argument("instance too large") when kEnumerate is
// asked for more than 20 users.
SplitSolution OrthogonalSplitSolve(const PfClusterProblem& cluster,
                                   SplitMode mode = SplitMode::kExact);

// Value of a given split (0 ln 0 = 0).
double OrthogonalSplitValue(const PfClusterProblem& cluster,
                            const std::vector<std::vector<bool>>& on_macro);

struct PfNetworkSolution {
  AllocationFractions fractions;
  double objective = 0.0;
  std::vector<double> lambda;  // per macro position in inst.macros()
};

// Per-macro bisection over a full DC association. Throws
// std::invalid_argument("unassociated user") for partial associations.
PfNetworkSolution PfAllocate(const NetworkInstance& inst,
                             const Association& assoc);

}  // namespace hetnet

#endif  // HETNET_PF_ALLOC_H_
