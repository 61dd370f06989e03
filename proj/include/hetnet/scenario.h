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

// Seeded HetNet drops: a 19-site, 3-sector macro layout (500 m inter-site
// distance) with picos scattered in each sector and users partly clustered
// around picos. Peak rates follow from received power, interference and
// noise; in-band deployments see every TP as an interferer, out-of-band ones
// only the TPs of the same tier.
//
// Every random quantity is drawn from a stream keyed by (seed, kind, index),
// so a user's position and shadowing do not depend on how many users follow
// it.

#ifndef HETNET_SCENARIO_H_
#define HETNET_SCENARIO_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/net_model.h"

namespace hetnet {

enum class BandMode { kInBand, kOutOfBand };

std::string ToString(BandMode mode);
// Accepts "in", "in-band", "out", "out-of-band".
BandMode ParseBandMode(std::string_view text);

struct DeploymentConfig {
  int macro_count = 57;
  int picos_per_macro = 10;
  int users_total = 342;
  double macro_tx_power_dbm = 46.0;
  double pico_tx_power_dbm = 40.0;
  double bandwidth_mhz = 10.0;
  double noise_psd_dbm_per_hz = -174.0;
  double noise_figure_db = 9.0;
  BandMode band_mode = BandMode::kOutOfBand;
  // Out-of-band only: split the bandwidth between the tiers instead of giving
  // each tier its own full band.
  bool split_bandwidth = false;
  uint64_t seed = 1;

  double isd_m = 500.0;
  double min_pico_separation_m = 40.0;
  double min_pico_macro_distance_m = 75.0;
  double min_user_macro_distance_m = 35.0;
  double min_user_pico_distance_m = 10.0;
  double user_cluster_radius_m = 40.0;
  double macro_shadowing_db = 8.0;
  double pico_shadowing_db = 10.0;
  double macro_antenna_gain_dbi = 14.0;
  double pico_antenna_gain_dbi = 5.0;

  // Minimum rate of every user (Mbps) for WSR association runs.
  double rate_min_mbps = 0.0;
  // Macros per coordination cluster used by partitioned association.
  int cluster_size = 1;
};

// Parses a JSON object or "key = value" lines ('#' starts a comment). Keys
// are the DeploymentConfig field names. Throws ParseError with the line.
DeploymentConfig ParseDeploymentConfig(std::string_view text);
// Throws std::invalid_argument on out-of-range values.
void ValidateConfig(const DeploymentConfig& config);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double Distance(Point a, Point b);

struct Deployment {
  DeploymentConfig config;
  std::vector<Point> macro_site;       // per macro position
  std::vector<double> macro_azimuth_deg;
  std::vector<Point> pico_position;    // per pico position in instance order
  std::vector<Point> user_position;
  // Dense user x TP matrices in instance TP order.
  std::vector<double> rx_power_dbm;
  std::vector<double> sinr_db;
  NetworkInstance instance;
};

Deployment Generate(const DeploymentConfig& config);

// 3GPP three-sector pattern: gain relative to boresight, in dB (<= 0).
double SectorPatternDb(double angle_off_boresight_deg);
double MacroPathLossDb(double distance_m);
double PicoPathLossDb(double distance_m);
double NoisePowerDbm(const DeploymentConfig& config, double bandwidth_mhz);

// Bandwidth available to one tier in MHz.
double TierBandwidthMhz(const DeploymentConfig& config);

// Peak rates from a dense rx-power matrix (users x TPs, instance order):
// W log2(1 + SINR) in Mbps. `is_macro` marks each TP's tier.
std::vector<double> PeakRatesFromPower(const DeploymentConfig& config,
                                       std::span<const double> rx_power_dbm,
                                       std::span<const char> is_macro,
                                       int num_users,
                                       std::vector<double>* sinr_db = nullptr);

struct Metrics {
  std::vector<double> cell_se;  // per cell
  double mean_cell_se = 0.0;
  double p5_se = 0.0;
};

// Cell SE = sum of the cell's user rates / bandwidth; 5-percentile SE is the
// nearest-rank 5% quantile of user rate / bandwidth.
Metrics ComputeMetrics(std::span<const double> rates,
                       std::span<const int> cell_of_user, int num_cells,
                       double bandwidth_mhz);

// Nearest-rank quantile, q in (0, 1].
double NearestRankQuantile(std::vector<double> values, double q);

// Macro position (in inst.macros()) each user belongs to: the macro of its
// link, or its best macro when unassociated.
std::vector<int> CellOfUsers(const NetworkInstance& inst, const Association& assoc);
std::vector<int> CellOfUsers(const NetworkInstance& inst,
                             std::span<const TpIndex> tp_of);

struct SingleTpAllocation {
  std::vector<TpIndex> tp_of;
  std::vector<double> share;
  UserRates rates;
};

// Each user joins its highest-peak-rate TP; each TP shares equally.
SingleTpAllocation MaxSinrBaseline(const NetworkInstance& inst);

// Consecutive groups of `cluster_size` macros (by position).
std::vector<int> ClusterOfMacros(int num_macros, int cluster_size);

}  // namespace hetnet

#endif  // HETNET_SCENARIO_H_
