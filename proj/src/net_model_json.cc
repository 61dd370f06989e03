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

#include "hetnet/net_model_json.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hetnet {

using nlohmann::json;

int LineOfOffset(std::string_view text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

NetworkSpec ParseNetworkSpec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the failure point.
    const size_t at = e.byte > 0 ? e.byte - 1 : 0;
    const int line = LineOfOffset(text, at);
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
  }
  NetworkSpec spec;
  try {
    for (const json& u : doc.at("users")) {
      UserSpec us;
      us.id = u.at("id").get<int64_t>();
      us.weight = u.value("weight", 1.0);
      us.rate_min = u.value("rate_min", 0.0);
      if (u.contains("rate_max") && !u["rate_max"].is_null()) {
        us.rate_max = u["rate_max"].get<double>();
      }
      spec.users.push_back(us);
    }
    for (const json& m : doc.at("macros")) {
      MacroSpec ms;
      ms.id = m.at("id").get<int64_t>();
      ms.picos = m.value("picos", std::vector<int64_t>{});
      spec.macros.push_back(std::move(ms));
    }
    for (const json& r : doc.at("peak_rates")) {
      if (!r.is_array() || r.size() != 3) {
        throw ParseError("peak_rates entries must be [user, tp, rate]", 0);
      }
      spec.peak_rates.push_back(
          {r[0].get<int64_t>(), r[1].get<int64_t>(), r[2].get<double>()});
    }
    if (doc.contains("rx_power_dbm")) {
      for (const json& r : doc["rx_power_dbm"]) {
        if (!r.is_array() || r.size() != 3) {
          throw ParseError("rx_power_dbm entries must be [user, tp, dbm]", 0);
        }
        spec.rx_power_dbm.push_back(
            {r[0].get<int64_t>(), r[1].get<int64_t>(), r[2].get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance schema: ") + e.what(), 0);
  }
  return spec;
}

std::string SerializeNetworkSpec(const NetworkSpec& spec) {
  // Hand-laid-out so large rate tables stay one entry per line.
  std::ostringstream out;
  auto num = [](double v) { return json(v).dump(); };
  out << "{\n  \"users\": [\n";
  for (size_t i = 0; i < spec.users.size(); ++i) {
    const UserSpec& u = spec.users[i];
    out << "    {\"id\": " << u.id << ", \"weight\": " << num(u.weight)
        << ", \"rate_min\": " << num(u.rate_min);
    if (!IsInfinite(u.rate_max)) out << ", \"rate_max\": " << num(u.rate_max);
    out << "}" << (i + 1 < spec.users.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"macros\": [\n";
  for (size_t i = 0; i < spec.macros.size(); ++i) {
    out << "    {\"id\": " << spec.macros[i].id
        << ", \"picos\": " << json(spec.macros[i].picos).dump() << "}"
        << (i + 1 < spec.macros.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"peak_rates\": [\n";
  for (size_t i = 0; i < spec.peak_rates.size(); ++i) {
    const PeakRateEntry& e = spec.peak_rates[i];
    out << "    [" << e.user << ", " << e.tp << ", " << num(e.rate) << "]"
        << (i + 1 < spec.peak_rates.size() ? "," : "") << "\n";
  }
  out << "  ]";
  if (!spec.rx_power_dbm.empty()) {
    out << ",\n  \"rx_power_dbm\": [\n";
    for (size_t i = 0; i < spec.rx_power_dbm.size(); ++i) {
      const RxPowerEntry& e = spec.rx_power_dbm[i];
      out << "    [" << e.user << ", " << e.tp << ", " << num(e.dbm) << "]"
          << (i + 1 < spec.rx_power_dbm.size() ? "," : "") << "\n";
    }
    out << "  ]";
  }
  out << "\n}\n";
  return out.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace hetnet
