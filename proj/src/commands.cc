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

#include "hetnet/commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hetnet/net_model.h"
#include "hetnet/net_model_json.h"
#include "hetnet/oracle.h"
#include "hetnet/pf_alloc.h"
#include "hetnet/pf_assoc.h"
#include "hetnet/scenario.h"
#include "hetnet/wsr_alloc.h"
#include "hetnet/wsr_assoc.h"
#include "json.hpp"

namespace hetnet {
namespace {

using nlohmann::json;

constexpr const char* kMetricsHeader =
    "# hetnet metrics v1\nscenario,load,algorithm,cell_se,p5_se\n";
constexpr const char* kGainsHeader =
    "# hetnet gains v1\nload,algorithm,cell_se_gain_pct,p5_se_gain_pct\n";
constexpr const char* kFig2Header = "# hetnet fig2 v1\ngamma,value,scalar\n";

// Shortest text that reads back to the same double.
std::string Num(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

DeploymentConfig LoadConfig(const std::string& path) {
  if (path.empty()) return DeploymentConfig{};
  const std::string text = ReadFile(path);
  try {
    return ParseDeploymentConfig(text);
  } catch (const ParseError& e) {
    throw CommandError(kExitUsage, path + ":" + std::to_string(e.line()) + ": " +
                                       e.what());
  } catch (const std::invalid_argument& e) {
    throw CommandError(kExitUsage, path + ": " + e.what());
  }
}

NetworkInstance LoadInstance(const std::string& path) {
  const std::string text = ReadFile(path);
  NetworkSpec spec;
  try {
    spec = ParseNetworkSpec(text);
  } catch (const ParseError& e) {
    throw CommandError(kExitUsage, path + ": " + e.what());
  }
  try {
    return NetworkInstance(spec);
  } catch (const InvalidInstanceError& e) {
    throw CommandError(kExitInfeasible, path + ": " + e.what());
  }
}

void Emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
  } else {
    WriteFile(path, contents);
  }
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> ParseDoubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& item : SplitList(s)) {
    size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw CommandError(kExitUsage, std::string("bad ") + what + " '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string MetricsRow(const std::string& scenario, int load,
                       const std::string& alg, const Metrics& m) {
  return scenario + "," + std::to_string(load) + "," + alg + "," +
         Num(m.mean_cell_se) + "," + Num(m.p5_se) + "\n";
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<std::string> band;
  std::optional<int> users;
  std::string out;
};

DeploymentConfig ResolveConfig(const std::string& path,
                               const std::optional<uint64_t>& seed,
                               const std::optional<std::string>& band) {
  DeploymentConfig c = LoadConfig(path);
  if (seed) c.seed = *seed;
  if (band) {
    try {
      c.band_mode = ParseBandMode(*band);
    } catch (const std::invalid_argument& e) {
      throw CommandError(kExitUsage, e.what());
    }
  }
  return c;
}

int CmdGenerate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  DeploymentConfig c = ResolveConfig(a.config, a.seed, a.band);
  if (a.users) c.users_total = *a.users;
  const Deployment d = Generate(c);
  Emit(a.out, SerializeNetworkSpec(d.instance.ToSpec()), out);
  err << "generated " << d.instance.num_users() << " users, "
      << d.instance.macros().size() << " macros, " << d.instance.num_picos()
      << " picos\n";
  return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string alg = "gels";
  double eps = 0.5;
  int64_t max_iter = 0;
  bool verify = false;
  int cluster_size = 0;
  bool exact_stage1 = false;
  double bandwidth_mhz = 10.0;
  std::string scenario = "instance";
  std::string out;
  std::string metrics;
};

json DcSolutionJson(const NetworkInstance& inst, const std::string& alg,
                    double value, const Association& assoc,
                    const AllocationFractions& fr, const UserRates& rates) {
  json users = json::array();
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    json e;
    e["id"] = inst.user_id(u);
    const auto& link = assoc.link(u);
    if (link) {
      e["macro"] = inst.tp_id(link->macro);
      e["pico"] = inst.tp_id(link->pico);
    } else {
      e["macro"] = nullptr;
      e["pico"] = nullptr;
    }
    e["theta"] = fr.theta[u];
    e["gamma"] = fr.gamma[u];
    e["rate"] = rates[u];
    users.push_back(std::move(e));
  }
  json j;
  j["algorithm"] = alg;
  j["value"] = value;
  j["users"] = std::move(users);
  return j;
}

// Oracle cross-checks on a GELS solution; returns false on disagreement.
bool VerifyWsr(const NetworkInstance& inst, const GroundSet& ground,
               const GelsResult& r, double eps, bool whole_network,
               std::ostream& log) {
  bool ok = true;
  for (TpIndex m : inst.macros()) {
    const ClusterProblem cluster =
        ClusterProblem::FromAssociation(inst, m, r.association);
    if (cluster.num_groups() == 0 || cluster.num_users() > 12) continue;
    const ClusterSolution sol = Algorithm1Allocate(cluster);
    const LpWsrResult lp = LpSolveWsr(cluster);
    const double rel = std::abs(sol.value - lp.value) / (1.0 + std::abs(lp.value));
    const auto kkt = VerifyKktWsr(cluster, sol.fractions);
    const bool pass = rel <= 1e-6 && kkt.empty();
    ok = ok && pass;
    log << "verify: macro " << inst.tp_id(m) << " alloc " << Num(sol.value)
        << " lp " << Num(lp.value) << " kkt_violations " << kkt.size()
        << (pass ? " ok" : " FAIL") << "\n";
  }
  if (whole_network && ground.size() <= 16) {
    const BruteForceWsrResult opt = BruteForceWsrAssoc(inst, ground);
    const bool applies = r.guarantee_applies;
    const bool pass = !applies || r.value >= opt.value / (4.0 + eps) - 1e-9;
    ok = ok && pass;
    log << "verify: gels " << Num(r.value) << " brute-force " << Num(opt.value)
        << (applies ? " bound-checked" : " bound-not-applicable")
        << (pass ? " ok" : " FAIL") << "\n";
  }
  return ok;
}

bool VerifyPf(const NetworkInstance& inst, const OspaResult& r,
              std::ostream& log) {
  bool ok = true;
  for (TpIndex m : inst.macros()) {
    const PfClusterProblem cluster =
        PfClusterProblem::FromAssociation(inst, m, r.association);
    if (cluster.num_groups() == 0 || cluster.num_users() > 40) continue;
    const PfDualSolution sol = PfBisection(cluster);
    const PfKktReport kkt = VerifyKktPf(cluster, sol.fractions);
    double oracle = 0.0;
    bool converged = true;
    try {
      oracle = PfConvexOracle(cluster);
    } catch (const NotConvergedError&) {
      converged = false;
    }
    const bool pass = kkt.max_residual() <= 1e-8 &&
                      (!converged || std::abs(oracle - sol.objective) <= 1e-4);
    ok = ok && pass;
    log << "verify: macro " << inst.tp_id(m) << " pf " << Num(sol.objective)
        << " oracle " << (converged ? Num(oracle) : std::string("not-converged"))
        << " kkt " << Num(kkt.max_residual()) << (pass ? " ok" : " FAIL") << "\n";
  }
  const double candidates =
      std::pow(static_cast<double>(inst.num_picos()), inst.num_users());
  if (candidates <= 1e4 && r.stage1.pi) {
    const BruteForceDcResult opt = BruteForceDcPf(inst);
    const double slack =
        *r.stage1.pi + std::min(inst.num_users(), inst.num_picos()) * std::log(2.0);
    const bool pass = r.value >= opt.value - slack - 1e-9;
    ok = ok && pass;
    log << "verify: ospa " << Num(r.value) << " brute-force " << Num(opt.value)
        << (pass ? " ok" : " FAIL") << "\n";
  }
  return ok;
}

int CmdSolve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  NetworkInstance inst = LoadInstance(a.instance);
  const int jittered = BreakRatioTies(inst);
  if (jittered > 0) err << "jittered " << jittered << " tied peak rates\n";
  const auto violations = ValidateInstance(inst);
  if (!violations.empty()) {
    for (const Violation& v : violations) {
      err << "inadmissible: " << ToString(v.kind) << ": " << v.message << "\n";
    }
    return kExitInfeasible;
  }

  json solution;
  Metrics metrics;
  bool verified = true;
  const int num_macros = static_cast<int>(inst.macros().size());
  if (a.alg == "gels") {
    const GroundSet ground(inst);
    GelsParams params;
    params.epsilon = a.eps;
    params.max_iter = a.max_iter;
    GelsResult r;
    if (a.cluster_size > 0) {
      const auto parts = PartitionGround(
          inst, ground, ClusterOfMacros(num_macros, a.cluster_size));
      r = GelsPartitioned(inst, ground, params, parts);
    } else {
      r = Gels(inst, ground, params);
    }
    WsrNetworkSolution alloc;
    try {
      alloc = WsrAllocate(inst, r.association);
    } catch (const InfeasibleError& e) {
      err << e.what() << "\n";
      return kExitInfeasible;
    }
    const UserRates rates = ComputeUserRates(inst, r.association, alloc.fractions);
    solution = DcSolutionJson(inst, a.alg, alloc.value, r.association,
                              alloc.fractions, rates);
    solution["greedy_value"] = r.greedy_value;
    solution["iterations"] = r.iterations;
    solution["guarantee_applies"] = r.guarantee_applies;
    metrics = ComputeMetrics(rates, CellOfUsers(inst, r.association), num_macros,
                             a.bandwidth_mhz);
    if (a.verify) verified =
        VerifyWsr(inst, ground, r, a.eps, a.cluster_size == 0, err);
  } else if (a.alg == "ospa") {
    SingleTpChoice choice;
    choice.mode = a.exact_stage1 ? SingleTpMode::kExact : SingleTpMode::kHeuristic;
    OspaResult r;
    try {
      r = Ospa(inst, choice);
    } catch (const std::invalid_argument& e) {
      err << "ospa: " << e.what() << "\n";
      return kExitInfeasible;
    }
    const UserRates rates = ComputeUserRates(inst, r.association, r.fractions);
    solution = DcSolutionJson(inst, a.alg, r.value, r.association, r.fractions, rates);
    solution["stage1_value"] = r.stage1.value;
    solution["pi"] = r.stage1.pi ? json(*r.stage1.pi) : json(nullptr);
    metrics = ComputeMetrics(rates, CellOfUsers(inst, r.association), num_macros,
                             a.bandwidth_mhz);
    if (a.verify) verified = VerifyPf(inst, r, err);
  } else if (a.alg == "max-sinr") {
    const SingleTpAllocation r = MaxSinrBaseline(inst);
    json users = json::array();
    double total = 0.0;
    for (UserIndex u = 0; u < inst.num_users(); ++u) {
      users.push_back({{"id", inst.user_id(u)},
                       {"tp", inst.tp_id(r.tp_of[u])},
                       {"share", r.share[u]},
                       {"rate", r.rates[u]}});
      total += r.rates[u];
    }
    solution["algorithm"] = a.alg;
    solution["value"] = total;
    solution["users"] = std::move(users);
    metrics = ComputeMetrics(r.rates, CellOfUsers(inst, r.tp_of), num_macros,
                             a.bandwidth_mhz);
    if (a.verify) {
      std::map<TpIndex, double> used;
      for (UserIndex u = 0; u < inst.num_users(); ++u) used[r.tp_of[u]] += r.share[u];
      for (const auto& [tp, s] : used) verified = verified && s <= 1.0 + 1e-12;
      err << "verify: round-robin shares " << (verified ? "ok" : "FAIL") << "\n";
    }
  } else {
    err << "unknown algorithm '" << a.alg << "' (expected gels, ospa or max-sinr)\n";
    return kExitUsage;
  }

  Emit(a.out, solution.dump(1) + "\n", out);
  if (!a.metrics.empty()) {
    const bool fresh = !std::filesystem::exists(a.metrics);
    std::ofstream f(a.metrics, std::ios::app);
    if (!f) throw std::runtime_error("cannot open " + a.metrics);
    if (fresh) f << kMetricsHeader;
    f << MetricsRow(a.scenario, inst.num_users(), a.alg, metrics);
  }
  return verified ? kExitOk : kExitVerifyFailed;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::optional<uint64_t> seed;
  int seeds = 1;
  std::optional<std::string> band;
  std::string loads = "342,684,1368";
  std::string algs = "gels,ospa";
  double eps = 0.5;
  int64_t max_iter = 0;
  std::string out = "sweep_out";
};

struct CellResult {
  std::vector<std::pair<std::string, Metrics>> rows;  // algorithm -> metrics
  std::vector<std::string> errors;
};

CellResult RunSweepCell(DeploymentConfig c, const std::vector<std::string>& algs,
                        const SweepArgs& a) {
  CellResult res;
  const Deployment d = Generate(c);
  const NetworkInstance& inst = d.instance;
  const int num_macros = c.macro_count;
  const SingleTpAllocation base = MaxSinrBaseline(inst);
  res.rows.emplace_back("max-sinr", ComputeMetrics(base.rates, CellOfUsers(inst, base.tp_of),
                                                   num_macros, c.bandwidth_mhz));
  for (const std::string& alg : algs) {
    try {
      if (alg == "gels") {
        const GroundSet ground(inst);
        GelsParams params;
        params.epsilon = a.eps;
        params.max_iter = a.max_iter;
        const auto parts =
            PartitionGround(inst, ground, ClusterOfMacros(num_macros, c.cluster_size));
        const GelsResult r = GelsPartitioned(inst, ground, params, parts);
        const WsrNetworkSolution alloc = WsrAllocate(inst, r.association);
        const UserRates rates = ComputeUserRates(inst, r.association, alloc.fractions);
        res.rows.emplace_back(alg, ComputeMetrics(rates, CellOfUsers(inst, r.association),
                                                  num_macros, c.bandwidth_mhz));
      } else if (alg == "ospa") {
        const OspaResult r = Ospa(inst, SingleTpChoice{SingleTpMode::kHeuristic});
        const UserRates rates = ComputeUserRates(inst, r.association, r.fractions);
        res.rows.emplace_back(alg, ComputeMetrics(rates, CellOfUsers(inst, r.association),
                                                  num_macros, c.bandwidth_mhz));
      }
    } catch (const std::exception& e) {
      res.errors.push_back(alg + ": " + e.what());
    }
  }
  return res;
}

int CmdSweep(const SweepArgs& a, std::ostream& err) {
  const DeploymentConfig base = ResolveConfig(a.config, a.seed, a.band);
  std::vector<int> loads;
  for (double v : ParseDoubles(a.loads, "load")) {
    if (v < 1 || v != std::floor(v)) throw CommandError(kExitUsage, "loads must be positive integers");
    loads.push_back(static_cast<int>(v));
  }
  const std::vector<std::string> algs = SplitList(a.algs);
  for (const std::string& alg : algs) {
    if (alg != "gels" && alg != "ospa") {
      throw CommandError(kExitUsage, "unknown sweep algorithm '" + alg + "'");
    }
  }
  if (loads.empty() || a.seeds < 1) throw CommandError(kExitUsage, "empty sweep");

  struct Cell {
    uint64_t seed;
    int load;
  };
  std::vector<Cell> cells;
  for (int s = 0; s < a.seeds; ++s) {
    for (int load : loads) cells.push_back({base.seed + static_cast<uint64_t>(s), load});
  }
  std::vector<CellResult> results(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      DeploymentConfig c = base;
      c.seed = cells[i].seed;
      c.users_total = cells[i].load;
      try {
        results[i] = RunSweepCell(c, algs, a);
      } catch (const std::exception& e) {
        results[i].errors.push_back(std::string("cell: ") + e.what());
      }
    }
  };
  const int threads = std::min<int>(ThreadBudget(), static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string metrics = kMetricsHeader;
  // (load, algorithm) -> summed metrics over seeds
  std::map<std::pair<int, std::string>, std::pair<double, double>> sums;
  std::map<std::pair<int, std::string>, int> counts;
  for (size_t i = 0; i < cells.size(); ++i) {
    const std::string scenario =
        ToString(base.band_mode) + "/seed" + std::to_string(cells[i].seed);
    for (const std::string& e : results[i].errors) {
      err << "sweep " << scenario << " load " << cells[i].load << ": " << e << "\n";
    }
    for (const auto& [alg, m] : results[i].rows) {
      metrics += MetricsRow(scenario, cells[i].load, alg, m);
      auto& s = sums[{cells[i].load, alg}];
      s.first += m.mean_cell_se;
      s.second += m.p5_se;
      ++counts[{cells[i].load, alg}];
    }
  }
  std::string gains = kGainsHeader;
  for (int load : loads) {
    const auto b = sums.find({load, "max-sinr"});
    if (b == sums.end()) continue;
    const double nb = counts[{load, "max-sinr"}];
    const double base_cell = b->second.first / nb;
    const double base_p5 = b->second.second / nb;
    for (const std::string& alg : algs) {
      const auto it = sums.find({load, alg});
      if (it == sums.end()) continue;
      const double n = counts[{load, alg}];
      const double cell = it->second.first / n;
      const double p5 = it->second.second / n;
      const double cell_gain = 100.0 * (cell - base_cell) / base_cell;
      const double p5_gain = base_p5 > 0.0 ? 100.0 * (p5 - base_p5) / base_p5 : 0.0;
      gains += std::to_string(load) + "," + alg + "," + Num(cell_gain) + "," +
               Num(p5_gain) + "\n";
    }
  }
  std::filesystem::create_directories(a.out);
  WriteFile((std::filesystem::path(a.out) / "metrics.csv").string(), metrics);
  WriteFile((std::filesystem::path(a.out) / "gains.csv").string(), gains);
  err << "sweep: " << cells.size() << " cells written to " << a.out << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------- fig2

struct Fig2Args {
  std::string config;
  std::optional<uint64_t> seed;
  std::string scalars = "0,0.1,0.2";
  int points = 201;
  std::string out;
};

int CmdFig2(const Fig2Args& a, std::ostream& out, std::ostream& err) {
  DeploymentConfig c = ResolveConfig(a.config, a.seed, std::nullopt);
  c.users_total = 30 * c.macro_count;
  c.rate_min_mbps = 0.0;
  const std::vector<double> scalars = ParseDoubles(a.scalars, "scalar");
  if (a.points < 2) throw CommandError(kExitUsage, "--points must be >= 2");
  const Deployment d = Generate(c);
  const NetworkInstance& inst = d.instance;
  const TpIndex macro = inst.macros()[0];

  std::string csv = kFig2Header;
  for (double s : scalars) {
    std::vector<PicoGroup> groups;
    for (TpIndex b : inst.picos_of(macro)) groups.push_back({b, 1.0, {}});
    for (UserIndex u = 0; u < inst.num_users(); ++u) {
      if (u % c.macro_count != 0) continue;
      const TpIndex b = StrongestPico(inst, u, macro);
      for (PicoGroup& g : groups) {
        if (g.pico != b) continue;
        const double rm = inst.peak_rate(u, macro);
        g.users.push_back({u, 1.0, rm, inst.peak_rate(u, b), s * rm, kInfiniteRate});
      }
    }
    ClusterProblem cluster(macro, 1.0, std::move(groups));
    double need = 0.0;
    for (const PicoGroup& g : cluster.groups()) need += MinMacroNeed(g, g.budget);
    if (need > 1.0 + kResourceTol) {
      err << "fig2: scalar " << Num(s) << " is infeasible (minimum macro need "
          << Num(need) << "), omitted\n";
      continue;
    }
    need = std::min(need, 1.0);
    for (int i = 0; i < a.points; ++i) {
      const double gamma = i + 1 == a.points
                               ? 1.0
                               : need + (1.0 - need) * i / (a.points - 1);
      cluster.set_macro_budget(gamma);
      const ClusterSolution sol = Algorithm1Allocate(cluster);
      csv += Num(gamma) + "," + Num(sol.value) + "," + Num(s) + "\n";
    }
  }
  Emit(a.out, csv, out);
  return kExitOk;
}

}  // namespace

int ThreadBudget() {
  if (const char* env = std::getenv("HETNET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Dual-connectivity HetNet association and allocation solvers",
               "hetnet"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate a seeded deployment");
  generate->add_option("--config", gen.config, "Deployment config (JSON or key = value)");
  generate->add_option("--seed", gen.seed, "Override the config seed");
  generate->add_option("--band", gen.band, "in or out")
      ->check(CLI::IsMember({"in", "out", "in-band", "out-of-band"}));
  generate->add_option("--users", gen.users, "Override users_total");
  generate->add_option("--out", gen.out, "Instance JSON path (stdout if omitted)");

  SolveArgs sol;
  CLI::App* solve = app.add_subcommand("solve", "Associate users and allocate resources");
  solve->add_option("instance", sol.instance, "Instance JSON")->required();
  solve->add_option("--alg", sol.alg, "gels, ospa or max-sinr");
  solve->add_option("--eps", sol.eps, "GELS local-search epsilon")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", sol.max_iter,
                    "GELS local-search iteration cap (0 = default, <0 = none)");
  solve->add_flag("--verify", sol.verify, "Cross-check against reference solvers");
  solve->add_option("--cluster-size", sol.cluster_size,
                    "Macros per GELS coordination cluster (0 = whole network)");
  solve->add_flag("--exact-stage1", sol.exact_stage1,
                  "Solve the OSPA single-TP stage by enumeration");
  solve->add_option("--bandwidth", sol.bandwidth_mhz, "Bandwidth for SE metrics (MHz)");
  solve->add_option("--scenario", sol.scenario, "Scenario label in the metrics row");
  solve->add_option("--out", sol.out, "Solution JSON path (stdout if omitted)");
  solve->add_option("--metrics", sol.metrics, "Append a metrics row to this CSV");

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Metrics over loads and seeds");
  sweep->add_option("--config", sw.config, "Deployment config");
  sweep->add_option("--seed", sw.seed, "First seed");
  sweep->add_option("--seeds", sw.seeds, "Number of consecutive seeds");
  sweep->add_option("--band", sw.band, "in or out")
      ->check(CLI::IsMember({"in", "out", "in-band", "out-of-band"}));
  sweep->add_option("--loads", sw.loads, "Comma-separated user counts");
  sweep->add_option("--alg", sw.algs, "Comma-separated algorithms (gels, ospa)");
  sweep->add_option("--eps", sw.eps, "GELS local-search epsilon")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--max-iter", sw.max_iter, "GELS local-search iteration cap");
  sweep->add_option("--out", sw.out, "Output directory");

  Fig2Args f2;
  CLI::App* fig2 = app.add_subcommand("fig2", "Cluster value over the macro budget");
  fig2->add_option("--config", f2.config, "Deployment config");
  fig2->add_option("--seed", f2.seed, "Override the config seed");
  fig2->add_option("--scalars", f2.scalars, "Comma-separated minimum-rate scalars");
  fig2->add_option("--points", f2.points, "Grid points per curve");
  fig2->add_option("--out", f2.out, "CSV path (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return CmdGenerate(gen, out, err);
    if (*solve) return CmdSolve(sol, out, err);
    if (*sweep) return CmdSweep(sw, err);
    if (*fig2) return CmdFig2(f2, out, err);
  } catch (const CommandError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hetnet
