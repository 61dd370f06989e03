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

// Small dense two-phase simplex with Bland's anti-cycling rule. Intended for
// verification-sized problems (tens of variables); it is not a general LP
// library.

#ifndef HETNET_LP_SOLVER_H_
#define HETNET_LP_SOLVER_H_

#include <vector>

namespace hetnet {

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };

struct LinearConstraint {
  std::vector<double> coeffs;  // one per variable
  ConstraintSense sense = ConstraintSense::kLessEqual;
  double rhs = 0.0;
};

// maximize (or minimize) objective . x  subject to constraints, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  bool maximize = true;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;

  explicit LinearProgram(int n = 0) : num_vars(n), objective(n, 0.0) {}
  void AddConstraint(std::vector<double> coeffs, ConstraintSense sense,
                     double rhs) {
    constraints.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

LpResult SolveLinearProgram(const LinearProgram& lp);

}  // namespace hetnet

#endif  // HETNET_LP_SOLVER_H_
