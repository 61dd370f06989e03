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

// JSON form of a network instance:
//
//   {"users": [{"id": 0, "weight": 1, "rate_min": 0, "rate_max": 5}, ...],
//    "macros": [{"id": 100, "picos": [101, 102]}, ...],
//    "peak_rates": [[user, tp, rate], ...],
//    "rx_power_dbm": [[user, tp, dbm], ...]}        // optional
//
// An omitted "rate_max" means no maximum rate.

#ifndef HETNET_NET_MODEL_JSON_H_
#define HETNET_NET_MODEL_JSON_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "hetnet/net_model.h"

namespace hetnet {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  // 1-based line of the offending input, or 0 when unknown.
  int line() const { return line_; }

 private:
  int line_;
};

NetworkSpec ParseNetworkSpec(std::string_view text);
std::string SerializeNetworkSpec(const NetworkSpec& spec);

// File helpers; throw std::runtime_error on IO failure.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// 1-based line number of a byte offset into text.
int LineOfOffset(std::string_view text, size_t offset);

}  // namespace hetnet

#endif  // HETNET_NET_MODEL_JSON_H_
