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

// Reference solvers used to cross-check the production algorithms: a direct
// LP for the weighted-sum-rate shares, exhaustive association searches, and a
// projected-gradient solver for the proportional-fair shares. None of these
// reuse the closed-form machinery they are meant to check. They are sized for
// tests and the CLI's --verify mode.

#ifndef HETNET_ORACLE_H_
#define HETNET_ORACLE_H_

#include <stdexcept>
#include <vector>

#include "hetnet/net_model.h"
#include "hetnet/pf_alloc.h"
#include "hetnet/wsr_alloc.h"

namespace hetnet {

class NotConvergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpWsrResult {
  double value = 0.0;
  ClusterFractions fractions;
};

// Solves the cluster's weighted-sum-rate LP directly. Throws InfeasibleError
// when the minimum rates cannot be met.
LpWsrResult LpSolveWsr(const ClusterProblem& cluster);

// Phase-one feasibility of the same LP.
bool LpFeasibleWsr(const ClusterProblem& cluster);

struct BruteForceWsrResult {
  std::vector<int> tuples;
  double value = 0.0;
};

// Best tuple set with distinct users whose macro slices are all feasible,
// each slice valued by LpSolveWsr. Throws std::invalid_argument("too large")
// for more than 16 tuples.
BruteForceWsrResult BruteForceWsrAssoc(const NetworkInstance& inst,
                                       const GroundSet& ground);

struct BruteForceDcResult {
  Association association;
  double value = 0.0;
};

// Best full dual-connectivity association for the proportional-fair
// objective. Throws std::invalid_argument("too large") beyond 1e6
// candidates.
BruteForceDcResult BruteForceDcPf(const NetworkInstance& inst);

struct ConvexOracleOptions {
  int max_iterations = 200000;
  // Stop once the certified duality gap falls below this.
  double gap_tol = 1e-7;
};

// Maximizes the cluster's sum of log rates by projected gradient ascent with
// backtracking. Throws NotConvergedError at the iteration cap.
double PfConvexOracle(const PfClusterProblem& cluster,
                      const ConvexOracleOptions& options = {});

// Euclidean projection onto {x >= 0, sum x = total}.
std::vector<double> ProjectOntoSimplex(std::vector<double> v, double total = 1.0);

}  // namespace hetnet

#endif  // HETNET_ORACLE_H_
