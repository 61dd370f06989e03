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

// Core domain types for a dual-connectivity heterogeneous network: users,
// macro transmission points (TPs), the pico TPs attached to each macro, and
// per-(user, TP) peak rates. Ids coming from files are opaque integers; every
// container inside the library is a dense array indexed by position, with
// users and TPs each sorted by id so that "smallest id" tie-breaks reduce to
// "smallest index".

#ifndef HETNET_NET_MODEL_H_
#define HETNET_NET_MODEL_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

// Dense position of a user in NetworkInstance (0..num_users()-1).
using UserIndex = int;
// Dense position of a TP (macro or pico) in NetworkInstance.
using TpIndex = int;

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

inline bool IsInfinite(double rate) { return rate == kInfiniteRate; }

// Raised when an instance description is structurally unusable (duplicate
// ids, peak rates naming unknown users/TPs, picos attached to no macro or to
// several macros).
class InvalidInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UserSpec {
  int64_t id = 0;
  double weight = 1.0;
  double rate_min = 0.0;
  double rate_max = kInfiniteRate;
};

struct MacroSpec {
  int64_t id = 0;
  std::vector<int64_t> picos;
};

struct PeakRateEntry {
  int64_t user = 0;
  int64_t tp = 0;
  double rate = 0.0;
};

struct RxPowerEntry {
  int64_t user = 0;
  int64_t tp = 0;
  double dbm = 0.0;
};

// File-level description, mirroring the JSON instance schema.
struct NetworkSpec {
  std::vector<UserSpec> users;
  std::vector<MacroSpec> macros;
  std::vector<PeakRateEntry> peak_rates;
  // Optional raw received powers, used to pick the "strongest" pico.
  std::vector<RxPowerEntry> rx_power_dbm;
};

enum class ViolationKind {
  kNonPositivePeakRate,
  kTiedRatio,
  kOrphanPico,
  kDuplicateId,
  kUnknownId,
  kMinAboveMax,
  kNonPositiveWeight,
  kNegativeMinRate,
};

std::string ToString(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

class NetworkInstance {
 public:
  NetworkInstance() = default;

  // Throws InvalidInstanceError on structural errors. Numeric admissibility
  // (positive rates, distinct ratios, min <= max) is reported separately by
  // ValidateInstance so that degenerate instances stay constructible.
  explicit NetworkInstance(const NetworkSpec& spec);

  int num_users() const { return static_cast<int>(user_ids_.size()); }
  int num_tps() const { return static_cast<int>(tp_ids_.size()); }
  int num_picos() const { return static_cast<int>(picos_.size()); }

  std::span<const TpIndex> macros() const { return macros_; }
  std::span<const TpIndex> picos() const { return picos_; }
  std::span<const TpIndex> picos_of(TpIndex macro) const {
    return picos_of_[macro];
  }
  bool is_macro(TpIndex tp) const { return macro_of_[tp] == tp; }
  // The macro a pico is attached to; a macro maps to itself.
  TpIndex macro_of(TpIndex tp) const { return macro_of_[tp]; }

  double peak_rate(UserIndex u, TpIndex tp) const {
    return peak_rate_[static_cast<size_t>(u) * num_tps() + tp];
  }
  double weight(UserIndex u) const { return weight_[u]; }
  double rate_min(UserIndex u) const { return rate_min_[u]; }
  double rate_max(UserIndex u) const { return rate_max_[u]; }

  bool has_rx_power() const { return !rx_power_dbm_.empty(); }
  // Only meaningful when has_rx_power().
  double rx_power_dbm(UserIndex u, TpIndex tp) const {
    return rx_power_dbm_[static_cast<size_t>(u) * num_tps() + tp];
  }

  int64_t user_id(UserIndex u) const { return user_ids_[u]; }
  int64_t tp_id(TpIndex tp) const { return tp_ids_[tp]; }
  std::optional<UserIndex> FindUser(int64_t id) const;
  std::optional<TpIndex> FindTp(int64_t id) const;

  void set_peak_rate(UserIndex u, TpIndex tp, double rate) {
    peak_rate_[static_cast<size_t>(u) * num_tps() + tp] = rate;
  }
  void set_rate_min(UserIndex u, double r) { rate_min_[u] = r; }
  void set_rate_max(UserIndex u, double r) { rate_max_[u] = r; }
  void set_weight(UserIndex u, double w) { weight_[u] = w; }
  void set_rx_power_dbm(std::vector<double> dense) {
    rx_power_dbm_ = std::move(dense);
  }

  NetworkSpec ToSpec() const;

 private:
  std::vector<int64_t> user_ids_;
  std::vector<int64_t> tp_ids_;
  std::vector<TpIndex> macros_;
  std::vector<TpIndex> picos_;
  std::vector<std::vector<TpIndex>> picos_of_;  // indexed by TP; empty for picos
  std::vector<TpIndex> macro_of_;
  std::vector<double> peak_rate_;
  std::vector<double> rx_power_dbm_;
  std::vector<double> weight_;
  std::vector<double> rate_min_;
  std::vector<double> rate_max_;
};

// Structural + numeric report on a raw description; empty iff admissible.
std::vector<Violation> ValidateSpec(const NetworkSpec& spec);
// Numeric admissibility report on a constructed instance.
std::vector<Violation> ValidateInstance(const NetworkInstance& inst);

// Perturbs peak rates by a relative jitter until no two users share a
// macro/pico rate ratio. Returns the number of perturbed entries.
int BreakRatioTies(NetworkInstance& inst, double relative_jitter = 1e-9);

// Dual-connectivity association: each user is either unassigned or attached
// to one pico (and therefore to that pico's macro).
struct DcLink {
  TpIndex macro = -1;
  TpIndex pico = -1;
  friend bool operator==(const DcLink&, const DcLink&) = default;
};

class Association {
 public:
  Association() = default;
  explicit Association(int num_users) : links_(num_users) {}

  int num_users() const { return static_cast<int>(links_.size()); }
  const std::optional<DcLink>& link(UserIndex u) const { return links_[u]; }
  void Assign(UserIndex u, DcLink link) { links_[u] = link; }
  void Clear(UserIndex u) { links_[u].reset(); }
  bool IsAssigned(UserIndex u) const { return links_[u].has_value(); }
  int num_assigned() const;

  friend bool operator==(const Association&, const Association&) = default;

 private:
  std::vector<std::optional<DcLink>> links_;
};

// Throws std::invalid_argument unless every link's pico belongs to its macro.
void CheckAssociation(const NetworkInstance& inst, const Association& assoc);

// Per-user shares of the associated macro (theta) and pico (gamma). Entries
// for unassociated users are zero.
struct AllocationFractions {
  std::vector<double> theta;
  std::vector<double> gamma;

  AllocationFractions() = default;
  explicit AllocationFractions(int num_users)
      : theta(num_users, 0.0), gamma(num_users, 0.0) {}
};

// Shares inside one cluster, per pico group, aligned with that group's
// user order.
struct GroupFractions {
  std::vector<double> theta;
  std::vector<double> gamma;
};

using ClusterFractions = std::vector<GroupFractions>;

using UserRates = std::vector<double>;

UserRates ComputeUserRates(const NetworkInstance& inst,
                           const Association& assoc,
                           const AllocationFractions& fractions);

// Largest amount by which any TP's summed share exceeds 1 (0 if none does).
double MaxBudgetExcess(const NetworkInstance& inst, const Association& assoc,
                       const AllocationFractions& fractions);

// A candidate (user, pico) association; the macro is implied by the pico.
struct GroundTuple {
  UserIndex user = -1;
  TpIndex pico = -1;
  TpIndex macro = -1;
  friend auto operator<=>(const GroundTuple&, const GroundTuple&) = default;
};

// All tuples with R_{u,m} + R_{u,b} >= R_u^min, sorted by (user, pico).
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(const NetworkInstance& inst);

  int size() const { return static_cast<int>(tuples_.size()); }
  const GroundTuple& operator[](int i) const { return tuples_[i]; }
  std::span<const GroundTuple> tuples() const { return tuples_; }
  // Indices into tuples() for each macro / each user.
  std::span<const int> of_macro(TpIndex macro) const { return by_macro_[macro]; }
  std::span<const int> of_user(UserIndex u) const { return by_user_[u]; }
  std::optional<int> Find(UserIndex u, TpIndex pico) const;

 private:
  std::vector<GroundTuple> tuples_;
  std::vector<std::vector<int>> by_macro_;  // indexed by TP
  std::vector<std::vector<int>> by_user_;
};

// Convenience: association built from a set of ground-tuple indices. Throws
// std::invalid_argument if a user appears twice.
Association AssociationFromTuples(const NetworkInstance& inst,
                                  const GroundSet& ground,
                                  std::span<const int> tuple_indices);

}  // namespace hetnet

#endif  // HETNET_NET_MODEL_H_
