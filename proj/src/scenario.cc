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

#include "hetnet/scenario.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hetnet/net_model_json.h"
#include "json.hpp"

namespace hetnet {
namespace {

constexpr double kPi = std::numbers::pi;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamKind : uint64_t { kPico = 1, kUser = 2 };

// Portable draws: the standard distributions are implementation-defined, so
// uniforms and normals are derived from the raw engine output here.
class Stream {
 public:
  Stream(uint64_t seed, StreamKind kind, uint64_t index)
      : gen_(SplitMix64(seed ^ SplitMix64((static_cast<uint64_t>(kind) << 56) ^
                                          SplitMix64(index)))) {}

  double Uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double Normal() {
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

// Axial hex coordinates of the 19 sites, center then rings in walk order.
std::vector<Point> SiteLayout(double isd) {
  std::vector<std::pair<int, int>> axial{{0, 0}};
  const int dirs[6][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
  for (int radius = 1; radius <= 2; ++radius) {
    int q = -radius, r = radius;  // radius steps along direction 4
    for (const auto& d : dirs) {
      for (int s = 0; s < radius; ++s) {
        axial.emplace_back(q, r);
        q += d[0];
        r += d[1];
      }
    }
  }
  std::vector<Point> sites;
  for (const auto& [q, r] : axial) {
    sites.push_back({isd * (q + 0.5 * r), isd * (r * std::sqrt(3.0) / 2.0)});
  }
  return sites;
}

double WrapDegrees(double a) {
  a = std::fmod(a + 180.0, 360.0);
  if (a < 0.0) a += 360.0;
  return a - 180.0;
}

double AngleDeg(Point from, Point to) {
  return std::atan2(to.y - from.y, to.x - from.x) * 180.0 / kPi;
}

// Inside the site's hexagonal cell and the sector's 120 degree wedge.
bool InSector(Point site, double azimuth, double isd, Point p) {
  const double dx = p.x - site.x;
  const double dy = p.y - site.y;
  for (int k = 0; k < 6; ++k) {
    const double a = k * kPi / 3.0;
    if (dx * std::cos(a) + dy * std::sin(a) > isd / 2.0) return false;
  }
  return std::abs(WrapDegrees(AngleDeg(site, p) - azimuth)) <= 60.0;
}

Point SampleInSector(Stream& s, Point site, double azimuth, double isd) {
  const double radius = isd / std::sqrt(3.0);
  while (true) {
    const double rho = radius * std::sqrt(s.Uniform());
    const double phi = (azimuth + (s.Uniform() * 2.0 - 1.0) * 60.0) * kPi / 180.0;
    const Point p{site.x + rho * std::cos(phi), site.y + rho * std::sin(phi)};
    if (InSector(site, azimuth, isd, p)) return p;
  }
}

constexpr int kMaxPlacementTries = 1000;

double DbmToMw(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace

std::string ToString(BandMode mode) {
  return mode == BandMode::kInBand ? "in" : "out";
}

BandMode ParseBandMode(std::string_view text) {
  if (text == "in" || text == "in-band") return BandMode::kInBand;
  if (text == "out" || text == "out-of-band") return BandMode::kOutOfBand;
  throw std::invalid_argument("unknown band mode '" + std::string(text) + "'");
}

namespace {

using Setter = std::function<void(DeploymentConfig&, std::string_view)>;

double ToDouble(std::string_view v) {
  const std::string s(v);
  size_t used = 0;
  const double d = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return d;
}

int64_t ToInt(std::string_view v) {
  const std::string s(v);
  size_t used = 0;
  const long long i = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
  return i;
}

bool ToBool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("not a boolean: " + std::string(v));
}

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* setters = new std::map<std::string, Setter, std::less<>>{
#define HETNET_DOUBLE(f) {#f, [](DeploymentConfig& c, std::string_view v) { c.f = ToDouble(v); }}
#define HETNET_INT(f) {#f, [](DeploymentConfig& c, std::string_view v) { c.f = static_cast<int>(ToInt(v)); }}
      HETNET_INT(macro_count),
      HETNET_INT(picos_per_macro),
      HETNET_INT(users_total),
      HETNET_DOUBLE(macro_tx_power_dbm),
      HETNET_DOUBLE(pico_tx_power_dbm),
      HETNET_DOUBLE(bandwidth_mhz),
      HETNET_DOUBLE(noise_psd_dbm_per_hz),
      HETNET_DOUBLE(noise_figure_db),
      {"band_mode", [](DeploymentConfig& c, std::string_view v) { c.band_mode = ParseBandMode(v); }},
      {"split_bandwidth", [](DeploymentConfig& c, std::string_view v) { c.split_bandwidth = ToBool(v); }},
      {"seed", [](DeploymentConfig& c, std::string_view v) { c.seed = static_cast<uint64_t>(ToInt(v)); }},
      HETNET_DOUBLE(isd_m),
      HETNET_DOUBLE(min_pico_separation_m),
      HETNET_DOUBLE(min_pico_macro_distance_m),
      HETNET_DOUBLE(min_user_macro_distance_m),
      HETNET_DOUBLE(min_user_pico_distance_m),
      HETNET_DOUBLE(user_cluster_radius_m),
      HETNET_DOUBLE(macro_shadowing_db),
      HETNET_DOUBLE(pico_shadowing_db),
      HETNET_DOUBLE(macro_antenna_gain_dbi),
      HETNET_DOUBLE(pico_antenna_gain_dbi),
      HETNET_DOUBLE(rate_min_mbps),
      HETNET_INT(cluster_size),
#undef HETNET_DOUBLE
#undef HETNET_INT
  };
  return *setters;
}

void ApplySetting(DeploymentConfig& c, std::string_view key,
                  std::string_view value, int line) {
  const auto& setters = Setters();
  auto it = setters.find(key);
  if (it == setters.end()) {
    throw ParseError("unknown config key '" + std::string(key) + "'", line);
  }
  try {
    it->second(c, value);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError("bad value for '" + std::string(key) + "': " + e.what(), line);
  }
}

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

DeploymentConfig ParseDeploymentConfig(std::string_view text) {
  DeploymentConfig c;
  const std::string_view body = Trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("config: ") + e.what(),
                       LineOfOffset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object", 1);
    for (const auto& [key, value] : j.items()) {
      // Keys are located for diagnostics only.
      const size_t at = text.find("\"" + key + "\"");
      const int line = at == std::string_view::npos ? 0 : LineOfOffset(text, at);
      const std::string v = value.is_string() ? value.get<std::string>() : value.dump();
      ApplySetting(c, key, v, line);
    }
  } else {
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
      const size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(
          pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = Trim(line);
      if (!line.empty()) {
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
          throw ParseError("expected 'key = value'", line_no);
        }
        ApplySetting(c, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)),
                     line_no);
      }
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }
  ValidateConfig(c);
  return c;
}

void ValidateConfig(const DeploymentConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(c.macro_count >= 1 && c.macro_count <= 57, "macro_count must be in [1, 57]");
  require(c.picos_per_macro >= 1, "picos_per_macro must be >= 1");
  require(c.users_total >= 0, "users_total must be >= 0");
  require(c.bandwidth_mhz > 0.0, "bandwidth_mhz must be > 0");
  require(c.isd_m > 0.0, "isd_m must be > 0");
  require(c.rate_min_mbps >= 0.0, "rate_min_mbps must be >= 0");
  require(c.cluster_size >= 1, "cluster_size must be >= 1");
  require(c.user_cluster_radius_m > 0.0, "user_cluster_radius_m must be > 0");
}

double Distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double SectorPatternDb(double angle_off_boresight_deg) {
  const double r = angle_off_boresight_deg / 70.0;
  return -std::min(12.0 * r * r, 20.0);
}

double MacroPathLossDb(double distance_m) {
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double PicoPathLossDb(double distance_m) {
  return 140.7 + 36.7 * std::log10(distance_m / 1000.0);
}

double NoisePowerDbm(const DeploymentConfig& c, double bandwidth_mhz) {
  return c.noise_psd_dbm_per_hz + 10.0 * std::log10(bandwidth_mhz * 1e6) +
         c.noise_figure_db;
}

double TierBandwidthMhz(const DeploymentConfig& c) {
  if (c.band_mode == BandMode::kOutOfBand && c.split_bandwidth) {
    return c.bandwidth_mhz / 2.0;
  }
  return c.bandwidth_mhz;
}

std::vector<double> PeakRatesFromPower(const DeploymentConfig& c,
                                       std::span<const double> rx_power_dbm,
                                       std::span<const char> is_macro,
                                       int num_users,
                                       std::vector<double>* sinr_db) {
  const int num_tps = static_cast<int>(is_macro.size());
  const double w = TierBandwidthMhz(c);
  const double noise = DbmToMw(NoisePowerDbm(c, w));
  std::vector<double> rates(static_cast<size_t>(num_users) * num_tps);
  if (sinr_db != nullptr) sinr_db->assign(rates.size(), 0.0);
  std::vector<double> mw(num_tps);
  for (int u = 0; u < num_users; ++u) {
    double macro_total = 0.0;
    double pico_total = 0.0;
    for (int t = 0; t < num_tps; ++t) {
      mw[t] = DbmToMw(rx_power_dbm[static_cast<size_t>(u) * num_tps + t]);
      (is_macro[t] ? macro_total : pico_total) += mw[t];
    }
    for (int t = 0; t < num_tps; ++t) {
      double interference;
      if (c.band_mode == BandMode::kInBand) {
        interference = macro_total + pico_total - mw[t];
      } else {
        interference = (is_macro[t] ? macro_total : pico_total) - mw[t];
      }
      const double sinr = mw[t] / (noise + std::max(0.0, interference));
      const size_t at = static_cast<size_t>(u) * num_tps + t;
      rates[at] = w * std::log2(1.0 + sinr);
      if (sinr_db != nullptr) (*sinr_db)[at] = 10.0 * std::log10(sinr);
    }
  }
  return rates;
}

Deployment Generate(const DeploymentConfig& config) {
  ValidateConfig(config);
  Deployment d;
  d.config = config;
  const DeploymentConfig& c = config;
  const std::vector<Point> sites = SiteLayout(c.isd_m);
  const double azimuths[3] = {30.0, 150.0, 270.0};
  for (int m = 0; m < c.macro_count; ++m) {
    d.macro_site.push_back(sites[m / 3]);
    d.macro_azimuth_deg.push_back(azimuths[m % 3]);
  }

  for (int m = 0; m < c.macro_count; ++m) {
    Stream s(c.seed, StreamKind::kPico, m);
    for (int j = 0; j < c.picos_per_macro; ++j) {
      Point p;
      for (int tries = 0; tries < kMaxPlacementTries; ++tries) {
        p = SampleInSector(s, d.macro_site[m], d.macro_azimuth_deg[m], c.isd_m);
        if (Distance(p, d.macro_site[m]) < c.min_pico_macro_distance_m) continue;
        const bool crowded = std::any_of(
            d.pico_position.begin(), d.pico_position.end(), [&](Point q) {
              return Distance(p, q) < c.min_pico_separation_m;
            });
        if (!crowded) break;
      }
      d.pico_position.push_back(p);
    }
  }

  const int num_macros = c.macro_count;
  const int num_picos = num_macros * c.picos_per_macro;
  const int num_tps = num_macros + num_picos;
  const int num_users = c.users_total;
  std::vector<char> is_macro(num_tps, 0);
  std::fill(is_macro.begin(), is_macro.begin() + num_macros, 1);
  d.rx_power_dbm.assign(static_cast<size_t>(num_users) * num_tps, 0.0);

  for (int i = 0; i < num_users; ++i) {
    Stream s(c.seed, StreamKind::kUser, i);
    const int m = i % num_macros;
    const Point site = d.macro_site[m];
    const bool clustered = (i / num_macros) % 3 != 2;
    Point p;
    if (clustered) {
      const int j = std::min(c.picos_per_macro - 1,
                             static_cast<int>(s.Uniform() * c.picos_per_macro));
      const Point center = d.pico_position[m * c.picos_per_macro + j];
      for (int tries = 0; tries < kMaxPlacementTries; ++tries) {
        const double rho = c.user_cluster_radius_m * std::sqrt(s.Uniform());
        const double phi = 2.0 * kPi * s.Uniform();
        p = {center.x + rho * std::cos(phi), center.y + rho * std::sin(phi)};
        if (Distance(p, site) >= c.min_user_macro_distance_m) break;
      }
    } else {
      for (int tries = 0; tries < kMaxPlacementTries; ++tries) {
        p = SampleInSector(s, site, d.macro_azimuth_deg[m], c.isd_m);
        if (Distance(p, site) >= c.min_user_macro_distance_m) break;
      }
    }
    d.user_position.push_back(p);

    for (int t = 0; t < num_tps; ++t) {
      double power;
      if (t < num_macros) {
        const double dist =
            std::max(Distance(p, d.macro_site[t]), c.min_user_macro_distance_m);
        const double off = WrapDegrees(AngleDeg(d.macro_site[t], p) -
                                       d.macro_azimuth_deg[t]);
        power = c.macro_tx_power_dbm + c.macro_antenna_gain_dbi +
                SectorPatternDb(off) - MacroPathLossDb(dist) -
                c.macro_shadowing_db * s.Normal();
      } else {
        const double dist = std::max(Distance(p, d.pico_position[t - num_macros]),
                                     c.min_user_pico_distance_m);
        power = c.pico_tx_power_dbm + c.pico_antenna_gain_dbi -
                PicoPathLossDb(dist) - c.pico_shadowing_db * s.Normal();
      }
      d.rx_power_dbm[static_cast<size_t>(i) * num_tps + t] = power;
    }
  }

  const std::vector<double> rates =
      PeakRatesFromPower(c, d.rx_power_dbm, is_macro, num_users, &d.sinr_db);

  NetworkSpec spec;
  for (int i = 0; i < num_users; ++i) {
    spec.users.push_back({i, 1.0, c.rate_min_mbps, kInfiniteRate});
  }
  for (int m = 0; m < num_macros; ++m) {
    MacroSpec ms{m, {}};
    for (int j = 0; j < c.picos_per_macro; ++j) {
      ms.picos.push_back(num_macros + m * c.picos_per_macro + j);
    }
    spec.macros.push_back(std::move(ms));
  }
  for (int i = 0; i < num_users; ++i) {
    for (int t = 0; t < num_tps; ++t) {
      const size_t at = static_cast<size_t>(i) * num_tps + t;
      spec.peak_rates.push_back({i, t, rates[at]});
      spec.rx_power_dbm.push_back({i, t, d.rx_power_dbm[at]});
    }
  }
  d.instance = NetworkInstance(spec);
  BreakRatioTies(d.instance);
  return d;
}

double NearestRankQuantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const size_t idx = static_cast<size_t>(std::max(1.0, rank)) - 1;
  return values[std::min(idx, values.size() - 1)];
}

Metrics ComputeMetrics(std::span<const double> rates,
                       std::span<const int> cell_of_user, int num_cells,
                       double bandwidth_mhz) {
  Metrics out;
  out.cell_se.assign(num_cells, 0.0);
  std::vector<double> se;
  for (size_t u = 0; u < rates.size(); ++u) {
    out.cell_se[cell_of_user[u]] += rates[u] / bandwidth_mhz;
    se.push_back(rates[u] / bandwidth_mhz);
  }
  double sum = 0.0;
  for (double v : out.cell_se) sum += v;
  out.mean_cell_se = num_cells > 0 ? sum / num_cells : 0.0;
  out.p5_se = NearestRankQuantile(std::move(se), 0.05);
  return out;
}

namespace {

int BestMacroPosition(const NetworkInstance& inst, UserIndex u) {
  const auto macros = inst.macros();
  int best = 0;
  for (size_t i = 1; i < macros.size(); ++i) {
    if (inst.peak_rate(u, macros[i]) > inst.peak_rate(u, macros[best])) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<int> MacroPositions(const NetworkInstance& inst) {
  std::vector<int> pos(inst.num_tps(), -1);
  const auto macros = inst.macros();
  for (size_t i = 0; i < macros.size(); ++i) pos[macros[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

std::vector<int> CellOfUsers(const NetworkInstance& inst, const Association& assoc) {
  const std::vector<int> pos = MacroPositions(inst);
  std::vector<int> cell(inst.num_users());
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const auto& link = assoc.link(u);
    cell[u] = link ? pos[link->macro] : BestMacroPosition(inst, u);
  }
  return cell;
}

std::vector<int> CellOfUsers(const NetworkInstance& inst,
                             std::span<const TpIndex> tp_of) {
  const std::vector<int> pos = MacroPositions(inst);
  std::vector<int> cell(inst.num_users());
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    cell[u] = tp_of[u] >= 0 ? pos[inst.macro_of(tp_of[u])] : BestMacroPosition(inst, u);
  }
  return cell;
}

SingleTpAllocation MaxSinrBaseline(const NetworkInstance& inst) {
  SingleTpAllocation out;
  std::vector<int> load(inst.num_tps(), 0);
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    TpIndex best = 0;
    for (TpIndex t = 1; t < inst.num_tps(); ++t) {
      if (inst.peak_rate(u, t) > inst.peak_rate(u, best)) best = t;
    }
    out.tp_of.push_back(best);
    ++load[best];
  }
  for (UserIndex u = 0; u < inst.num_users(); ++u) {
    const TpIndex t = out.tp_of[u];
    out.share.push_back(1.0 / load[t]);
    out.rates.push_back(inst.peak_rate(u, t) / load[t]);
  }
  return out;
}

std::vector<int> ClusterOfMacros(int num_macros, int cluster_size) {
  if (cluster_size < 1) throw std::invalid_argument("cluster_size must be >= 1");
  std::vector<int> out(num_macros);
  for (int i = 0; i < num_macros; ++i) out[i] = i / cluster_size;
  return out;
}

}  // namespace hetnet
