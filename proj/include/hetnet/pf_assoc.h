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

// Proportional-fair association. Stage one picks a single serving TP per
// user under round-robin sharing; OSPA then adds the second link (pico users
// gain their macro, macro users gain their strongest pico) and re-optimizes
// the shares of every cluster.

#ifndef HETNET_PF_ASSOC_H_
#define HETNET_PF_ASSOC_H_

#include <optional>
#include <span>
#include <vector>

#include "hetnet/net_model.h"

namespace hetnet {

enum class SingleTpMode { kExact, kHeuristic };

struct SingleTpChoice {
  SingleTpMode mode = SingleTpMode::kHeuristic;
};

// Sum of log peak rates minus sum over TPs of n ln n (n = TP load). `tp_of`
// holds one TP per user; throws std::invalid_argument("unassigned user") on
// a negative entry.
double SingleTpPfObjective(const NetworkInstance& inst,
                           std::span<const TpIndex> tp_of);

struct SingleTpResult {
  std::vector<TpIndex> tp_of;
  double value = 0.0;
  // Additive optimality gap; zero for exact mode, unknown for the heuristic.
  std::optional<double> pi;
};

// Exact mode enumerates every assignment and throws
// std::invalid_argument("too large for exact") beyond 2e7 of them.
SingleTpResult SingleTpPfSolve(const NetworkInstance& inst,
                               const SingleTpChoice& choice);

// Pico of `macro` with the strongest received power when known, otherwise
// the highest peak rate; ties go to the smallest index.
TpIndex StrongestPico(const NetworkInstance& inst, UserIndex user,
                      TpIndex macro);

struct OspaResult {
  Association association;
  AllocationFractions fractions;
  double value = 0.0;
  SingleTpResult stage1;
};

// Throws std::invalid_argument if a macro has no pico.
OspaResult Ospa(const NetworkInstance& inst, const SingleTpChoice& choice);

}  // namespace hetnet

#endif  // HETNET_PF_ASSOC_H_
