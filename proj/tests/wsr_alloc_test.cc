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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hetnet/lp_solver.h"
#include "hetnet/oracle.h"
#include "test_util.h"

namespace hetnet {
namespace {

ClusterUser User(UserIndex u, double r1, double rb, double rmin = 0.0,
                 double rmax = kInfiniteRate, double w = 1.0) {
  return ClusterUser{u, w, r1, rb, rmin, rmax};
}

PicoGroup Group(std::vector<ClusterUser> users, double budget = 1.0) {
  PicoGroup g{1, budget, std::move(users)};
  LabelUsers(g);
  return g;
}

// min sum of one side's shares subject to the minimum rates, with the other
// side capped at `other_budget`.
double MinNeedLp(const PicoGroup& g, double other_budget, bool macro_side) {
  const int n = static_cast<int>(g.users.size());
  LinearProgram lp(2 * n);
  lp.maximize = false;
  std::vector<double> cap(2 * n, 0.0);
  for (int k = 0; k < n; ++k) {
    lp.objective[2 * k + (macro_side ? 0 : 1)] = 1.0;
    cap[2 * k + (macro_side ? 1 : 0)] = 1.0;
    std::vector<double> row(2 * n, 0.0);
    row[2 * k] = g.users[k].macro_rate;
    row[2 * k + 1] = g.users[k].pico_rate;
    lp.AddConstraint(row, ConstraintSense::kGreaterEqual, g.users[k].rate_min);
  }
  lp.AddConstraint(cap, ConstraintSense::kLessEqual, other_budget);
  const LpResult r = SolveLinearProgram(lp);
  EXPECT_EQ(r.status, LpStatus::kOptimal);
  return r.value;
}

double LpValueAt(const PicoGroup& g, double z_b) {
  ClusterProblem c(0, z_b, {g});
  return LpSolveWsr(c).value;
}

TEST(MinNeedTest, SingleUserClosedForms) {
  const PicoGroup g = Group({User(0, 1.0, 2.0, 3.0)});
  EXPECT_DOUBLE_EQ(MinMacroNeed(g, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(MinPicoNeed(g, 1.0), 1.0);
}

TEST(MinNeedTest, ZeroMinRatesNeedNothing) {
  const PicoGroup g = Group({User(0, 1, 2), User(1, 3, 1)});
  EXPECT_EQ(MinMacroNeed(g, 1.0), 0.0);
  EXPECT_EQ(MinPicoNeed(g, 0.0), 0.0);
}

TEST(MinNeedTest, MatchesLpOnRandomGroups) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    PicoGroup g = testing::RandomGroup(rng, 1, 3, 0);
    for (ClusterUser& cu : g.users) cu.rate_min = unit(rng) * cu.pico_rate * 0.5;
    LabelUsers(g);
    const double gamma_b = 0.5;
    EXPECT_NEAR(MinMacroNeed(g, gamma_b), MinNeedLp(g, gamma_b, true), 1e-9);
    const double z_b = 0.3;
    EXPECT_NEAR(MinPicoNeed(g, z_b), MinNeedLp(g, z_b, false), 1e-9);
  }
}

TEST(PicoSlopeCurveTest, SingleUserSingleSegment) {
  const PicoGroup g = Group({User(0, 1.0, 1.0)});
  const SlopeCurve c = PicoSlopeCurve(g, 1.0);
  ASSERT_EQ(c.segments().size(), 1u);
  EXPECT_DOUBLE_EQ(c.segments()[0].slope, 1.0);
  EXPECT_DOUBLE_EQ(c.start(), 0.0);
  EXPECT_DOUBLE_EQ(c.end(), 1.0);
}

TEST(PicoSlopeCurveTest, TwoUsersHandExample) {
  const PicoGroup g = Group({User(0, 1.0, 4.0), User(1, 2.0, 3.0)});
  const SlopeCurve c = PicoSlopeCurve(g, 1.0);
  ASSERT_FALSE(c.empty());
  EXPECT_DOUBLE_EQ(c.start_value(), 4.0);
  EXPECT_DOUBLE_EQ(c.segments()[0].slope, 2.0);
  EXPECT_NEAR(c.ValueAt(1.0), 6.0, 1e-12);
  EXPECT_NEAR(LpValueAt(g, 1.0), 6.0, 1e-9);
  const PicoSolution s = SolveSinglePico(g, 1.0, 1.0);
  EXPECT_NEAR(s.value, 6.0, 1e-12);
}

TEST(PicoSlopeCurveTest, MaxRateBendsTheCurve) {
  // Alone, user 1 would take the macro at slope 2; its cap of 3 binds at
  // Z = 0.5 (pico rate 0 since user 0 holds the pico), after which user 0
  // takes the macro at slope 1.
  const PicoGroup g = Group({User(0, 1.0, 4.0), User(1, 2.0, 0.5, 0.0, 1.0)});
  const SlopeCurve c = PicoSlopeCurve(g, 1.0);
  const auto bps = c.Breakpoints();
  ASSERT_GE(c.segments().size(), 2u);
  EXPECT_GT(c.segments()[0].slope, c.segments()[1].slope);
  const double bend = bps[1];
  for (double z : {bend * 0.5, bend, 0.5 * (bend + 1.0), 1.0}) {
    EXPECT_NEAR(c.ValueAt(z), LpValueAt(g, z), 1e-9) << "z=" << z;
  }
}

TEST(PicoSlopeCurveTest, SlopesNonIncreasingAndMatchLp) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    ClusterProblem cluster = testing::RandomFeasibleCluster(rng, 5, 1);
    const PicoGroup& g = cluster.group(0);
    const SlopeCurve c = PicoSlopeCurve(g, g.budget);
    for (size_t i = 1; i < c.segments().size(); ++i) {
      EXPECT_LT(c.segments()[i].slope, c.segments()[i - 1].slope);
    }
    for (double t : {0.0, 0.37, 0.81, 1.0}) {
      const double z = c.start() + t * (1.0 - c.start());
      const double lp = LpValueAt(g, z);
      EXPECT_NEAR(c.ValueAt(z), lp, 1e-9 * (1.0 + lp));
    }
  }
}

TEST(PicoSlopeCurveTest, EmptyGroupThrows) {
  EXPECT_THROW(PicoSlopeCurve(PicoGroup{}, 1.0), std::invalid_argument);
}

TEST(SlackValueTest, ClosedForms) {
  EXPECT_DOUBLE_EQ(SlackValue(Group({User(0, 1.0, 2.0, 3.0)}), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(SlackValue(Group({User(0, 1.0, 2.0, 0.0, kInfiniteRate, 1.5)}), 0.8),
                   1.5 * 2.0 * 0.8);
  // Greedy fill by weighted pico rate: user 1 (w R_b = 6) saturates at 3,
  // using half the pico; user 0 (w R_b = 4) takes the rest.
  const PicoGroup g =
      Group({User(0, 1.0, 4.0, 0.0, kInfiniteRate), User(1, 1.0, 6.0, 0.0, 3.0)});
  EXPECT_NEAR(SlackValue(g, 1.0), 3.0 + 2.0, 1e-12);
  EXPECT_NEAR(LpValueAt(g, 0.0), 5.0, 1e-9);
}

TEST(SolveSinglePicoTest, AtMinimumNeedOnlyMinRatesAreServed) {
  const PicoGroup g = Group({User(0, 1.0, 2.0, 3.0, kInfiniteRate, 2.0)});
  const PicoSolution s = SolveSinglePico(g, 1.0, 1.0);
  EXPECT_NEAR(s.value, 6.0, 1e-12);
  EXPECT_THROW(SolveSinglePico(g, 0.5, 1.0), InfeasibleError);
}

TEST(SolveSinglePicoTest, SingleUserTakesBothBudgets) {
  const PicoSolution s = SolveSinglePico(Group({User(0, 2.0, 5.0)}), 1.0, 1.0);
  EXPECT_NEAR(s.value, 7.0, 1e-12);
  EXPECT_NEAR(s.fractions.theta[0], 1.0, 1e-12);
  EXPECT_NEAR(s.fractions.gamma[0], 1.0, 1e-12);
}

TEST(Algorithm1Test, BindingMinRateHandExample) {
  ClusterProblem c(0, 1.0, {Group({User(0, 1.0, 4.0), User(1, 2.0, 3.0, 4.0)})});
  const ClusterSolution s = Algorithm1Allocate(c);
  EXPECT_NEAR(s.value, 16.0 / 3.0, 1e-12);
  // Users are labeled by decreasing R_b / R_1: user 0 first.
  const GroupFractions& f = s.fractions[0];
  ASSERT_EQ(c.group(0).users[0].user, 0);
  EXPECT_NEAR(f.theta[1], 1.0, 1e-12);
  EXPECT_NEAR(f.gamma[1], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.gamma[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.theta[0], 0.0, 1e-12);
}

TEST(Algorithm1Test, BudgetAtSummedNeedGivesMinRatesPlusSlack) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ClusterProblem c = testing::RandomFeasibleCluster(rng, 6, 3);
    double need = 0.0, base = 0.0;
    for (const PicoGroup& g : c.groups()) {
      need += MinMacroNeed(g, g.budget);
      for (const ClusterUser& cu : g.users) base += cu.weight * cu.rate_min;
      base += SlackValue(g, g.budget);
    }
    c.set_macro_budget(need);
    EXPECT_NEAR(Algorithm1Allocate(c).value, base, 1e-9 * (1.0 + base));
  }
}

TEST(Algorithm1Test, InfeasibleBudgetThrows) {
  ClusterProblem c(0, 1.0, {Group({User(0, 1.0, 2.0, 3.5)})});
  EXPECT_FALSE(FeasibilityCheck(c));
  EXPECT_THROW(Algorithm1Allocate(c), InfeasibleError);
}

TEST(Algorithm1Test, MergedCurveIsConcaveOverBudget) {
  std::mt19937_64 rng(29);
  ClusterProblem c = testing::RandomFeasibleCluster(rng, 8, 3);
  const ClusterSolution s = Algorithm1Allocate(c);
  for (size_t i = 1; i < s.curve.segments().size(); ++i) {
    EXPECT_LT(s.curve.segments()[i].slope, s.curve.segments()[i - 1].slope);
  }
  double prev = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double g = s.curve.start() + (1.0 - s.curve.start()) * i / 20.0;
    c.set_macro_budget(g);
    const double v = Algorithm1Allocate(c).value;
    EXPECT_NEAR(v, s.curve.ValueAt(g), 1e-9 * (1.0 + v));
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
  }
}

TEST(Algorithm1Test, AgreesWithLpAndSatisfiesKkt) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const ClusterProblem c = testing::RandomFeasibleCluster(rng, 8, 3);
    const ClusterSolution s = Algorithm1Allocate(c);
    const LpWsrResult lp = LpSolveWsr(c);
    EXPECT_NEAR(s.value, lp.value, 1e-6 * (1.0 + lp.value));
    EXPECT_NEAR(WeightedSumRate(c, s.fractions), s.value, 1e-9 * (1.0 + s.value));
    EXPECT_TRUE(VerifyKktWsr(c, s.fractions).empty()) << "trial " << trial;
  }
}

TEST(FeasibilityTest, AgreesWithLpPhaseOne) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int infeasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<PicoGroup> groups;
    for (int b = 0; b < 2; ++b) {
      PicoGroup g = testing::RandomGroup(rng, 1 + b, 3, 3 * b);
      for (ClusterUser& cu : g.users) cu.rate_min = unit(rng) * 1.5;
      groups.push_back(g);
    }
    const ClusterProblem c(0, 1.0, groups);
    EXPECT_EQ(FeasibilityCheck(c), LpFeasibleWsr(c)) << "trial " << trial;
    infeasible += !LpFeasibleWsr(c);
  }
  EXPECT_GT(infeasible, 0);
}

TEST(VerifyKktWsrTest, SlackToWorseUserIsFlagged) {
  // User 0 earns 4 per pico unit, user 1 earns 3; neither has limits. Giving
  // the pico to user 1 breaks the slack ordering.
  ClusterProblem c(0, 0.0, {Group({User(0, 1.0, 4.0), User(1, 1.0, 3.0)})});
  ClusterFractions f = {GroupFractions{{0.0, 0.0}, {0.0, 1.0}}};
  const auto report = VerifyKktWsr(c, f);
  ASSERT_FALSE(report.empty());
  bool slack = false;
  for (const KktViolation& v : report) slack = slack || v.condition == 2;
  EXPECT_TRUE(slack);
}

TEST(VerifyKktWsrTest, LpVertexPasses) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const ClusterProblem c = testing::RandomFeasibleCluster(rng, 6, 2);
    EXPECT_TRUE(VerifyKktWsr(c, LpSolveWsr(c).fractions).empty()) << "trial " << trial;
  }
}

TEST(SlopeCurveTest, AppendMergesAndEvaluates) {
  SlopeCurve c(0.25, 1.0);
  c.Append(0.25, 3.0);
  c.Append(0.25, 3.0);
  c.Append(0.0, 2.0);
  c.Append(0.25, 1.0);
  ASSERT_EQ(c.segments().size(), 2u);
  EXPECT_DOUBLE_EQ(c.end(), 1.0);
  EXPECT_DOUBLE_EQ(c.ValueAt(0.75), 2.5);
  EXPECT_DOUBLE_EQ(c.ValueAt(2.0), 2.75);
  EXPECT_DOUBLE_EQ(c.SlopeAt(0.8), 1.0);
  EXPECT_DOUBLE_EQ(c.SlopeAt(1.0), 0.0);
  EXPECT_EQ(c.ToCsv(), "breakpoint,slope\n0.25,3\n0.75,1\n");
}

TEST(PicoSlopeCurveTest, SmallerPicoBudgetNeverLowersSlope) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const ClusterProblem c = testing::RandomFeasibleCluster(rng, 5, 1);
    const PicoGroup& g = c.group(0);
    const double delta = 0.5 * unit(rng);
    if (MinMacroNeed(g, 1.0 - delta) > 1.0) continue;
    const SlopeCurve full = PicoSlopeCurve(g, 1.0);
    const SlopeCurve less = PicoSlopeCurve(g, 1.0 - delta);
    for (int i = 0; i < 50; ++i) {
      const double z = less.start() + (1.0 - less.start()) * (i + 0.5) / 50.0;
      EXPECT_LE(full.SlopeAt(z), less.SlopeAt(z) + 1e-9) << "trial " << trial << " z " << z;
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(Algorithm1Test, FractionsReproduceValue) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const ClusterProblem c = testing::RandomFeasibleCluster(rng, 8, 3);
    const ClusterSolution s = Algorithm1Allocate(c);
    EXPECT_NEAR(WeightedSumRate(c, s.fractions), s.value, 1e-10 * s.value);
  }
}

}  // namespace
}  // namespace hetnet
