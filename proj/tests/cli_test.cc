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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "hetnet/net_model_json.h"
#include "json.hpp"

namespace hetnet {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hetnet_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    WriteFile(Path("tiny.cfg"), "macro_count = 2\npicos_per_macro = 2\nusers_total = 4\n");
    WriteFile(Path("desk.cfg"), "macro_count = 3\nusers_total = 18\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GenerateDefaultHas342Users) {
  ASSERT_EQ(Run({"generate", "--out", Path("inst.json")}), kExitOk) << err_.str();
  const NetworkSpec spec = ParseNetworkSpec(ReadFile(Path("inst.json")));
  EXPECT_EQ(spec.users.size(), 342u);
  EXPECT_EQ(spec.macros.size(), 57u);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  ASSERT_EQ(Run({"generate", "--config", Path("tiny.cfg"), "--seed", "7", "--out", Path("a.json")}), 0);
  ASSERT_EQ(Run({"generate", "--config", Path("tiny.cfg"), "--seed", "7", "--out", Path("b.json")}), 0);
  EXPECT_EQ(ReadFile(Path("a.json")), ReadFile(Path("b.json")));
}

TEST_F(CliTest, MalformedConfigFailsWithLine) {
  WriteFile(Path("bad.cfg"), "macro_count = 3\nmacro_count 4\n");
  EXPECT_EQ(Run({"generate", "--config", Path("bad.cfg")}), kExitUsage);
  EXPECT_NE(err_.str().find("bad.cfg:2"), std::string::npos) << err_.str();
  EXPECT_EQ(Run({"generate", "--config", Path("missing.cfg")}), kExitUsage);
}

TEST_F(CliTest, SolveVerifiesEveryAlgorithm) {
  ASSERT_EQ(Run({"generate", "--config", Path("tiny.cfg"), "--out", Path("t.json")}), 0);
  for (const char* alg : {"gels", "ospa", "max-sinr"}) {
    EXPECT_EQ(Run({"solve", Path("t.json"), "--alg", alg, "--verify", "--out",
                   Path(std::string(alg) + ".json"), "--metrics", Path("m.csv")}),
              kExitOk)
        << alg << ": " << err_.str();
    EXPECT_NE(err_.str().find("verify:"), std::string::npos);
    EXPECT_EQ(err_.str().find("FAIL"), std::string::npos) << err_.str();
  }
  const std::string csv = ReadFile(Path("m.csv"));
  EXPECT_EQ(csv.rfind("# hetnet metrics v1\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  const auto j = nlohmann::json::parse(ReadFile(Path("max-sinr.json")));
  std::map<int64_t, int> load;
  for (const auto& u : j["users"]) ++load[u["tp"].get<int64_t>()];
  for (const auto& u : j["users"]) {
    EXPECT_DOUBLE_EQ(u["share"].get<double>(), 1.0 / load[u["tp"].get<int64_t>()]);
  }
}

TEST_F(CliTest, SolveRejectsUnknownAlgorithm) {
  ASSERT_EQ(Run({"generate", "--config", Path("tiny.cfg"), "--out", Path("t.json")}), 0);
  EXPECT_EQ(Run({"solve", Path("t.json"), "--alg", "simplex"}), kExitUsage);
  EXPECT_EQ(Run({"bogus"}), kExitUsage);
  EXPECT_EQ(Run({}), kExitUsage);
}

TEST_F(CliTest, SolveReportsInadmissibleInstance) {
  WriteFile(Path("zero.json"),
            R"({"users": [{"id": 0}], "macros": [{"id": 1, "picos": [2]}],
                "peak_rates": [[0, 1, 1.0], [0, 2, 0.0]]})");
  EXPECT_EQ(Run({"solve", Path("zero.json"), "--alg", "gels"}), kExitInfeasible);
  EXPECT_NE(err_.str().find("non-positive peak rate"), std::string::npos);
}

TEST_F(CliTest, SweepWritesMetricsAndGains) {
  ASSERT_EQ(Run({"sweep", "--config", Path("desk.cfg"), "--loads", "18,72", "--out",
                 Path("sw")}),
            kExitOk)
      << err_.str();
  const std::string gains = ReadFile(Path("sw/gains.csv"));
  EXPECT_EQ(std::count(gains.begin(), gains.end(), '\n'), 2 + 2 * 2);
  const std::string metrics = ReadFile(Path("sw/metrics.csv"));
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 2 + 2 * 3);

  ASSERT_EQ(Run({"sweep", "--config", Path("desk.cfg"), "--loads", "18,72", "--out",
                 Path("sw2")}),
            kExitOk);
  EXPECT_EQ(ReadFile(Path("sw2/metrics.csv")), metrics);
  EXPECT_EQ(ReadFile(Path("sw2/gains.csv")), gains);
}

TEST_F(CliTest, SweepSingleLoadSingleAlgorithm) {
  ASSERT_EQ(Run({"sweep", "--config", Path("desk.cfg"), "--loads", "18", "--alg", "ospa",
                 "--out", Path("one")}),
            kExitOk);
  const std::string metrics = ReadFile(Path("one/metrics.csv"));
  // The max-SINR baseline row is always present next to the requested one.
  EXPECT_NE(metrics.find(",18,ospa,"), std::string::npos);
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 2 + 2);
}

TEST_F(CliTest, Fig2CurvesAreConcaveAndOrdered) {
  ASSERT_EQ(Run({"fig2", "--config", Path("desk.cfg"), "--scalars", "0,0.1,5", "--points", "41",
                 "--out", Path("f2.csv")}),
            kExitOk)
      << err_.str();
  EXPECT_NE(err_.str().find("scalar 5 is infeasible"), std::string::npos) << err_.str();
  std::istringstream in(ReadFile(Path("f2.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# hetnet fig2 v1");
  std::getline(in, line);
  std::map<double, std::vector<std::pair<double, double>>> curves;
  while (std::getline(in, line)) {
    double g, v, s;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &g, &v, &s), 3);
    curves[s].push_back({g, v});
  }
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0.0].front().first, 0.0);
  EXPECT_GT(curves[0.1].front().first, 0.0);
  EXPECT_LE(curves[0.1].back().second, curves[0.0].back().second);
}

TEST_F(CliTest, ThreadBudgetHonorsEnvironment) {
  setenv("HETNET_THREADS", "3", 1);
  EXPECT_EQ(ThreadBudget(), 3);
  setenv("HETNET_THREADS", "junk", 1);
  EXPECT_GE(ThreadBudget(), 1);
  unsetenv("HETNET_THREADS");
}

}  // namespace
}  // namespace hetnet
