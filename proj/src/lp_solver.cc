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

#include "hetnet/lp_solver.h"

#include <cmath>
#include <stdexcept>

namespace hetnet {
namespace {

constexpr double kPivotTol = 1e-11;

// Tableau in canonical form for a maximization. Row 0 holds reduced costs
// (z - c.x = value); rows 1..m hold constraints; the last column is the rhs.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1), allowed_(cols, true) {}

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }
  void forbid(int col) { allowed_[col] = false; }

  void Pivot(int row, int col) {
    const double p = at(row, col);
    for (int c = 0; c <= cols_; ++c) at(row, c) /= p;
    for (int r = 0; r <= rows_; ++r) {
      if (r == row) continue;
      const double f = at(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(row, c);
    }
    basis_[row - 1] = col;
  }

  // Runs Bland's rule to optimality. Returns false if unbounded.
  bool Optimize() {
    for (;;) {
      int enter = -1;
      for (int c = 0; c < cols_; ++c) {
        if (allowed_[c] && at(0, c) < -kPivotTol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 1; r <= rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (leave < 0 || ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 &&
             basis_[r - 1] < basis_[leave - 1])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      Pivot(leave, enter);
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
};

}  // namespace

LpResult SolveLinearProgram(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.constraints.size());
  if (static_cast<int>(lp.objective.size()) != n) {
    throw std::invalid_argument("objective size mismatch");
  }

  // Normalize rows to non-negative rhs and count auxiliary columns.
  struct Row {
    std::vector<double> a;
    ConstraintSense sense;
    double b;
  };
  std::vector<Row> rows;
  rows.reserve(m);
  int num_slack = 0;
  int num_art = 0;
  for (const LinearConstraint& c : lp.constraints) {
    if (static_cast<int>(c.coeffs.size()) != n) {
      throw std::invalid_argument("constraint size mismatch");
    }
    Row r{c.coeffs, c.sense, c.rhs};
    if (r.b < 0) {
      for (double& v : r.a) v = -v;
      r.b = -r.b;
      if (r.sense == ConstraintSense::kLessEqual) {
        r.sense = ConstraintSense::kGreaterEqual;
      } else if (r.sense == ConstraintSense::kGreaterEqual) {
        r.sense = ConstraintSense::kLessEqual;
      }
    }
    if (r.sense != ConstraintSense::kEqual) ++num_slack;
    if (r.sense != ConstraintSense::kLessEqual) ++num_art;
    rows.push_back(std::move(r));
  }

  const int cols = n + num_slack + num_art;
  Tableau t(m, cols);
  int next_slack = n;
  int next_art = n + num_slack;
  std::vector<int> art_cols;
  for (int i = 0; i < m; ++i) {
    const Row& r = rows[i];
    for (int j = 0; j < n; ++j) t.at(i + 1, j) = r.a[j];
    t.rhs(i + 1) = r.b;
    if (r.sense == ConstraintSense::kLessEqual) {
      t.at(i + 1, next_slack) = 1.0;
      t.basis()[i] = next_slack++;
    } else {
      if (r.sense == ConstraintSense::kGreaterEqual) {
        t.at(i + 1, next_slack++) = -1.0;
      }
      t.at(i + 1, next_art) = 1.0;
      t.basis()[i] = next_art;
      art_cols.push_back(next_art++);
    }
  }

  LpResult result;
  if (!art_cols.empty()) {
    // Phase 1: maximize -(sum of artificials).
    for (int c : art_cols) t.at(0, c) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] >= n + num_slack) {
        for (int c = 0; c <= cols; ++c) t.at(0, c) -= t.at(i + 1, c);
      }
    }
    t.Optimize();
    const double infeasibility = -t.rhs(0);
    double scale = 1.0;
    for (const Row& r : rows) scale = std::max(scale, std::abs(r.b));
    if (infeasibility > 1e-9 * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < n + num_slack) continue;
      for (int c = 0; c < n + num_slack; ++c) {
        if (std::abs(t.at(i + 1, c)) > 1e-9) {
          t.Pivot(i + 1, c);
          break;
        }
      }
    }
    for (int c : art_cols) t.forbid(c);
  }

  // Phase 2.
  for (int c = 0; c <= cols; ++c) t.at(0, c) = 0.0;
  const double sign = lp.maximize ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) t.at(0, j) = -sign * lp.objective[j];
  for (int i = 0; i < m; ++i) {
    const int b = t.basis()[i];
    const double f = t.at(0, b);
    if (f == 0.0) continue;
    for (int c = 0; c <= cols; ++c) t.at(0, c) -= f * t.at(i + 1, c);
  }
  if (!t.Optimize()) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis()[i] < n) result.x[t.basis()[i]] = std::max(0.0, t.rhs(i + 1));
  }
  double value = 0.0;
  for (int j = 0; j < n; ++j) value += lp.objective[j] * result.x[j];
  result.value = value;
  return result;
}

}  // namespace hetnet
