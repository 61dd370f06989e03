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

// Acceptance suite: one PASS/FAIL line per criterion AC1..AC8. Exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hetnet/commands.h"
#include "hetnet/net_model_json.h"
#include "hetnet/oracle.h"
#include "hetnet/pf_alloc.h"
#include "hetnet/pf_assoc.h"
#include "hetnet/wsr_alloc.h"
#include "hetnet/wsr_assoc.h"
#include "test_util.h"

namespace hetnet {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const double kLn2 = std::log(2.0);

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

int Cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  if (err_text != nullptr) *err_text = err.str();
  return code;
}

// (gamma, value) points of each scalar in a fig2 CSV.
std::map<double, std::vector<std::pair<double, double>>> ReadFig2(const std::string& path) {
  std::map<double, std::vector<std::pair<double, double>>> curves;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    double g, v, s;
    if (line.empty() || line[0] == '#' || line[0] == 'g') continue;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &g, &v, &s) == 3) curves[s].push_back({g, v});
  }
  return curves;
}

double Interpolate(const std::vector<std::pair<double, double>>& curve, double g) {
  if (g <= curve.front().first) return curve.front().second;
  for (size_t i = 1; i < curve.size(); ++i) {
    if (g <= curve[i].first) {
      const auto [g0, v0] = curve[i - 1];
      const auto [g1, v1] = curve[i];
      return v0 + (v1 - v0) * (g - g0) / (g1 - g0);
    }
  }
  return curve.back().second;
}

NetworkInstance AdmittedInstance(std::mt19937_64& rng, int users) {
  NetworkInstance inst(testing::RandomSpec(rng, users, 2, 2));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (UserIndex u = 0; u < users; ++u) {
    double weakest = INFINITY;
    for (TpIndex m : inst.macros()) weakest = std::min(weakest, inst.peak_rate(u, m));
    inst.set_rate_min(u, unit(rng) * weakest / (2.0 * users));
  }
  return inst;
}

Outcome Ac1WsrOracle() {
  std::mt19937_64 rng(101);
  const auto start = Clock::now();
  double worst = 0.0;
  int bad = 0;
  const int n = 120;
  for (int i = 0; i < n; ++i) {
    const ClusterProblem c = testing::RandomFeasibleCluster(rng, 8, 3);
    const double a = Algorithm1Allocate(c).value;
    const double b = LpSolveWsr(c).value;
    const double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
    worst = std::max(worst, rel);
    bad += rel > 1e-6;
  }
  const double t = Seconds(start);
  return {bad == 0 && t < 5.0,
          Fmt("%d clusters, max rel diff %.3g, %d over 1e-6, %.2fs (limit 5s)", n, worst, bad, t)};
}

Outcome Ac2Fig2(const fs::path& dir) {
  const std::string csv = (dir / "fig2.csv").string();
  std::string err;
  if (Cli({"fig2", "--scalars", "0,0.1,0.2", "--out", csv}, &err) != kExitOk) {
    return {false, "fig2 failed: " + err};
  }
  auto curves = ReadFig2(csv);
  if (curves.size() != 3) return {false, Fmt("expected 3 curves, got %zu", curves.size())};
  int bad_monotone = 0, bad_concave = 0, bad_order = 0;
  for (const auto& [s, pts] : curves) {
    double prev_slope = INFINITY;
    for (size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].second < pts[i - 1].second - 1e-9) ++bad_monotone;
      const double slope = (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
      if (slope > prev_slope + 1e-9) ++bad_concave;
      prev_slope = slope;
    }
  }
  const std::vector<double> scalars = {0.0, 0.1, 0.2};
  for (int k = 1; k < 3; ++k) {
    const auto& lo = curves[scalars[k - 1]];
    const auto& hi = curves[scalars[k]];
    if (!(hi.front().first > lo.front().first)) ++bad_order;
    for (const auto& [g, v] : hi) {
      if (v > Interpolate(lo, g) + 1e-9) ++bad_order;
    }
  }
  return {bad_monotone + bad_concave + bad_order == 0,
          Fmt("starts %.4f/%.4f/%.4f, decreasing %d, convex kinks %d, order breaks %d",
              curves[0.0].front().first, curves[0.1].front().first,
              curves[0.2].front().first, bad_monotone, bad_concave, bad_order)};
}

Outcome Ac3Submodularity() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int probes = 0, bad = 0;
  double worst = 0.0;
  while (probes < 200) {
    const bool with_min = probes % 2 == 1;
    NetworkInstance inst = with_min ? AdmittedInstance(rng, 6)
                                    : NetworkInstance(testing::RandomSpec(rng, 6, 2, 2));
    GroundSet ground(inst);
    std::vector<int> f, e;
    std::vector<char> used(inst.num_users(), 0);
    for (UserIndex u = 0; u < inst.num_users(); ++u) {
      const auto opts = ground.of_user(u);
      if (opts.empty() || unit(rng) < 0.35) continue;
      const int pick = opts[rng() % opts.size()];
      f.push_back(pick);
      used[u] = 1;
      if (unit(rng) < 0.5) e.push_back(pick);
    }
    std::vector<int> outside;
    for (int x = 0; x < ground.size(); ++x) {
      if (!used[ground[x].user]) outside.push_back(x);
    }
    if (outside.empty()) continue;
    const int x = outside[rng() % outside.size()];
    auto value = [&](std::vector<int> s, bool add) {
      if (add) s.push_back(x);
      std::sort(s.begin(), s.end());
      return FWsr(inst, ground, s);
    };
    const auto fe = value(e, false), fex = value(e, true);
    const auto ff = value(f, false), ffx = value(f, true);
    if (!fe || !fex || !ff || !ffx) continue;  // outside J
    const double excess = (*ffx - *ff) - (*fex - *fe);
    worst = std::max(worst, excess);
    bad += excess > 1e-8;
    ++probes;
  }

  int budget_probes = 0, budget_bad = 0, same_pico = 0;
  double budget_worst = 0.0;
  while (budget_probes < 200) {
    ClusterProblem c = testing::RandomFeasibleCluster(rng, 8, 3);
    if (c.num_groups() < 2) continue;
    for (int g = 0; g < c.num_groups(); ++g) c.set_pico_budget(g, 0.4 + 0.4 * unit(rng));
    double need = 0.0;
    for (const PicoGroup& g : c.groups()) need += MinMacroNeed(g, g.budget);
    if (need > 0.6) continue;
    const double base = need + (0.6 - need) * unit(rng);
    const double d = 0.2 * unit(rng), dt = 0.2 * unit(rng);
    const double db1 = 0.2 * unit(rng), db2 = 0.2 * unit(rng);
    const int b1 = static_cast<int>(rng() % c.num_groups());
    const int b2 = budget_probes % 2 == 0 ? b1 : static_cast<int>(rng() % c.num_groups());
    same_pico += b1 == b2;
    std::vector<double> pico(c.num_groups());
    for (int g = 0; g < c.num_groups(); ++g) pico[g] = c.group(g).budget;
    auto value = [&](double macro, double add1, double add2) {
      ClusterProblem p = c;
      p.set_macro_budget(macro);
      p.set_pico_budget(b1, pico[b1] + add1);
      p.set_pico_budget(b2, p.group(b2).budget + add2);
      return Algorithm1Allocate(p).value;
    };
    const double lhs = value(base, 0, 0) - value(base + d, db1, 0);
    const double rhs = value(base + dt, 0, db2) - value(base + dt + d, db1, db2);
    budget_worst = std::max(budget_worst, lhs - rhs);
    budget_bad += lhs - rhs > 1e-8;
    ++budget_probes;
  }
  return {bad == 0 && budget_bad == 0,
          Fmt("set probes %d (max excess %.3g, %d bad); budget probes %d incl. %d same-pico "
              "(max excess %.3g, %d bad)",
              probes, worst, bad, budget_probes, same_pico, budget_worst, budget_bad)};
}

Outcome Ac4Gels() {
  std::mt19937_64 rng(404);
  int bad_gels = 0, bad_greedy = 0, done_gels = 0;
  double worst_gels = INFINITY, worst_greedy = INFINITY;
  while (done_gels < 50) {
    NetworkInstance inst = AdmittedInstance(rng, 4);
    GroundSet ground(inst);
    if (ground.size() > 16 || !CheckAdmissionControl(inst, ground)) continue;
    GelsParams p;
    p.epsilon = 0.5;
    p.max_iter = -1;
    const GelsResult r = Gels(inst, ground, p);
    const double opt = BruteForceWsrAssoc(inst, ground).value;
    worst_gels = std::min(worst_gels, r.value / opt);
    bad_gels += r.value < opt / 4.5 - 1e-9;
    ++done_gels;
  }
  for (int i = 0; i < 50; ++i) {
    NetworkInstance inst(testing::RandomSpec(rng, 4, 2, 2));
    GroundSet ground(inst);
    const GelsResult r = Gels(inst, ground, {});
    const double opt = BruteForceWsrAssoc(inst, ground).value;
    worst_greedy = std::min(worst_greedy, r.greedy_value / opt);
    bad_greedy += r.greedy_value < opt / 2.0 - 1e-9;
  }
  return {bad_gels == 0 && bad_greedy == 0,
          Fmt("GELS worst ratio %.4f over 50 (bound 1/4.5, %d violations); greedy worst "
              "ratio %.4f over 50 (bound 1/2, %d violations)",
              worst_gels, bad_gels, worst_greedy, bad_greedy)};
}

Outcome Ac5PfBisection() {
  std::mt19937_64 rng(505);
  double worst_res = 0.0, worst_kkt = 0.0, worst_gap = 0.0;
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const PfClusterProblem c = testing::RandomPfCluster(rng, 2 + i % 29, 1 + i % 10);
    const PfDualSolution s = PfBisection(c);
    const double n = c.num_users();
    const double res = std::abs(MacroLoadExcess(c, s.lambda)) / n;
    const double kkt = VerifyKktPf(c, s.fractions).max_residual();
    const double gap = std::abs(PfConvexOracle(c) - s.objective);
    worst_res = std::max(worst_res, res);
    worst_kkt = std::max(worst_kkt, kkt);
    worst_gap = std::max(worst_gap, gap);
    bad += res > 1e-10 || kkt > 1e-8 || gap > 1e-4;
  }
  const PfClusterProblem pair(0, {PfPicoGroup{1, {{0, 1.0, 1.0}, {1, 2.0, 1.0}}}});
  const PfDualSolution s = PfBisection(pair);
  const bool analytic = std::abs(s.lambda - 1.0) <= 1e-10 && std::abs(s.objective - kLn2) <= 1e-12;
  return {bad == 0 && analytic,
          Fmt("50 clusters: max residual/N %.3g, max KKT %.3g, max oracle gap %.3g, %d bad; "
              "2-user lambda %.12f objective %.12f",
              worst_res, worst_kkt, worst_gap, bad, s.lambda, s.objective)};
}

Outcome Ac6Ospa() {
  std::mt19937_64 rng(606);
  int bad_ospa = 0, bad_split = 0, clusters = 0;
  double worst_slack = INFINITY;
  for (int i = 0; i < 30; ++i) {
    const int users = 3 + i % 4;
    NetworkInstance inst(testing::RandomSpec(rng, users, 2, 2));
    const OspaResult r = Ospa(inst, {SingleTpMode::kExact});
    const BruteForceDcResult opt = BruteForceDcPf(inst);
    const double bound = std::min(users, inst.num_picos()) * kLn2;
    worst_slack = std::min(worst_slack, r.value - (opt.value - bound));
    bad_ospa += r.value < opt.value - bound - 1e-9;
    for (const Association* assoc : {&r.association, &opt.association}) {
      for (TpIndex m : inst.macros()) {
        const PfClusterProblem c = PfClusterProblem::FromAssociation(inst, m, *assoc);
        if (c.num_groups() == 0) continue;
        const double pf = PfBisection(c).objective;
        const double split = OrthogonalSplitSolve(c, SplitMode::kExact).value;
        const double k = std::min(c.num_groups(), c.num_users());
        bad_split += split < pf - k * kLn2 - 1e-9 || split > pf + 1e-9;
        ++clusters;
      }
    }
  }
  return {bad_ospa == 0 && bad_split == 0,
          Fmt("30 instances: min slack to bound %.4f, %d OSPA violations; %d clusters, %d "
              "split-bound violations",
              worst_slack, bad_ospa, clusters, bad_split)};
}

Outcome Ac7Trends(const fs::path& dir) {
  const std::string cfg = (dir / "desk.cfg").string();
  WriteFile(cfg, "macro_count = 7\npicos_per_macro = 10\nband_mode = out\n");
  const std::string out = (dir / "sweep").string();
  const int seeds = 3;
  const auto start = Clock::now();
  std::string err;
  if (Cli({"sweep", "--config", cfg, "--loads", "42,168", "--seeds", std::to_string(seeds),
           "--alg", "gels,ospa", "--out", out},
          &err) != kExitOk ||
      err.find(" load ") != std::string::npos) {
    return {false, "sweep failed: " + err};
  }
  const double per_cell = Seconds(start) / (2 * seeds);
  std::map<std::pair<int, std::string>, double> se;
  std::istringstream in(ReadFile(out + "/metrics.csv"));
  std::string line;
  while (std::getline(in, line)) {
    char scenario[64], alg[32];
    int load;
    double cell, p5;
    if (std::sscanf(line.c_str(), "%63[^,],%d,%31[^,],%lf,%lf", scenario, &load, alg, &cell,
                    &p5) == 5) {
      se[{load, alg}] += cell / seeds;
    }
  }
  auto gain = [&](int load, const char* alg) {
    return 100.0 * (se[{load, alg}] / se[{load, "max-sinr"}] - 1.0);
  };
  const bool beats = se[{42, "gels"}] > se[{42, "max-sinr"}] && se[{42, "ospa"}] > se[{42, "max-sinr"}];
  const bool trend = gain(42, "ospa") > gain(168, "ospa");
  return {beats && trend && per_cell < 120.0,
          Fmt("load 42 cell SE: max-sinr %.3f gels %.3f ospa %.3f; OSPA gain %.1f%% at 42 vs "
              "%.1f%% at 168; GELS gain %.1f%% vs %.1f%% (informational); %.2fs per cell",
              se[{42, "max-sinr"}], se[{42, "gels"}], se[{42, "ospa"}], gain(42, "ospa"),
              gain(168, "ospa"), gain(42, "gels"), gain(168, "gels"), per_cell)};
}

Outcome Ac8Determinism(const fs::path& dir) {
  const std::string cfg = (dir / "det.cfg").string();
  WriteFile(cfg, "macro_count = 3\nusers_total = 18\n");
  auto run_all = [&](const std::string& tag) {
    const fs::path d = dir / tag;
    fs::create_directories(d);
    auto p = [&](const char* name) { return (d / name).string(); };
    int rc = 0;
    rc |= Cli({"generate", "--config", cfg, "--seed", "7", "--out", p("inst.json")});
    for (const char* alg : {"gels", "ospa", "max-sinr"}) {
      rc |= Cli({"solve", p("inst.json"), "--alg", alg, "--out",
                 (d / (std::string(alg) + ".json")).string(), "--metrics", p("metrics.csv")});
    }
    rc |= Cli({"sweep", "--config", cfg, "--seed", "7", "--loads", "18,36", "--out", p("sweep")});
    rc |= Cli({"fig2", "--config", cfg, "--seed", "7", "--out", p("fig2.csv")});
    return rc;
  };
  if (run_all("a") != 0 || run_all("b") != 0) return {false, "a command failed"};
  int files = 0, differ = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "a");
    ++files;
    differ += ReadFile(entry.path().string()) != ReadFile((dir / "b" / rel).string());
  }
  return {files == 8 && differ == 0, Fmt("%d output files compared, %d differ", files, differ)};
}

}  // namespace
}  // namespace hetnet

int main() {
  using hetnet::Outcome;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hetnet_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 WSR allocation matches LP oracle", hetnet::Ac1WsrOracle},
      {"AC2 cluster value curves concave and ordered", [&] { return hetnet::Ac2Fig2(dir); }},
      {"AC3 diminishing returns", hetnet::Ac3Submodularity},
      {"AC4 GELS and greedy guarantees", hetnet::Ac4Gels},
      {"AC5 PF bisection accuracy", hetnet::Ac5PfBisection},
      {"AC6 OSPA and orthogonal split bounds", hetnet::Ac6Ospa},
      {"AC7 desk-scale gains over max-SINR", [&] { return hetnet::Ac7Trends(dir); }},
      {"AC8 byte-identical reruns", [&] { return hetnet::Ac8Determinism(dir); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(dir);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
