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

// The `hetnet` command line: generate, solve, sweep and fig2. Kept in the
// library so tests can drive it in-process.

#ifndef HETNET_COMMANDS_H_
#define HETNET_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace hetnet {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInfeasible = 2,
  kExitVerifyFailed = 3,
};

// `args` excludes the program name. Normal output goes to `out`,
// diagnostics and verification logs to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Worker count for sweeps: HETNET_THREADS if set and positive, otherwise the
// hardware concurrency (at least one).
int ThreadBudget();

}  // namespace hetnet

#endif  // HETNET_COMMANDS_H_
