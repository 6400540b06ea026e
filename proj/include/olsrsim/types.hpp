#pragma once

#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olsrsim {

/// Dense node identifier, 0..N-1 within a scenario.
enum class NodeId : std::uint32_t {};

constexpr std::uint32_t index(NodeId n) { return static_cast<std::uint32_t>(n); }

/// Simulation clock. Fixed-point milliseconds for both instants and spans so
/// that event ordering never depends on floating-point rounding.
using SimTime = std::chrono::duration<std::int64_t, std::milli>;

SimTime seconds(double s);
double to_seconds(SimTime t);

/// Energy quantity held as integer nanojoules. Ledger arithmetic is exact;
/// conversions to joules are only used at the estimation boundary.
class Energy {
 public:
  constexpr Energy() = default;

  static constexpr Energy nanojoules(std::int64_t nj) { return Energy{nj}; }
  static Energy joules(double j) { return Energy{std::llround(j * 1e9)}; }

  constexpr std::int64_t as_nanojoules() const { return nj_; }
  constexpr double as_joules() const { return static_cast<double>(nj_) * 1e-9; }

  constexpr Energy& operator+=(Energy o) {
    nj_ += o.nj_;
    return *this;
  }
  constexpr Energy& operator-=(Energy o) {
    nj_ -= o.nj_;
    return *this;
  }
  friend constexpr Energy operator+(Energy a, Energy b) { return Energy{a.nj_ + b.nj_}; }
  friend constexpr Energy operator-(Energy a, Energy b) { return Energy{a.nj_ - b.nj_}; }
  friend constexpr Energy operator*(Energy a, std::int64_t k) { return Energy{a.nj_ * k}; }
  friend constexpr auto operator<=>(Energy, Energy) = default;

 private:
  constexpr explicit Energy(std::int64_t nj) : nj_(nj) {}
  std::int64_t nj_ = 0;
};

enum class TcRedundancy { SelectorsOnly, SelectorsPlusMprs, AllNeighbors };
enum class MprPolicy { Classic, EnergyAware };
enum class PathPolicy { ShortestHop, BottleneckEnergy, WidestBandwidth };
enum class EstimationMode { Ideal, Realistic, Prediction, SmartPrediction };

std::string_view to_string(TcRedundancy v);
std::string_view to_string(MprPolicy v);
std::string_view to_string(PathPolicy v);
std::string_view to_string(EstimationMode v);

std::optional<TcRedundancy> parse_tc_redundancy(std::string_view s);
std::optional<MprPolicy> parse_mpr_policy(std::string_view s);
std::optional<PathPolicy> parse_path_policy(std::string_view s);
std::optional<EstimationMode> parse_estimation_mode(std::string_view s);

/// Tunable protocol knobs plus the policy selectors for the variant matrix.
struct ProtocolParams {
  SimTime hello_interval = seconds(2.0);
  SimTime tc_interval = seconds(5.0);
  int mpr_coverage = 1;
  TcRedundancy tc_redundancy = TcRedundancy::SelectorsOnly;
  SimTime neighbor_hold_time = seconds(6.0);
  SimTime topology_hold_time = seconds(15.0);
  MprPolicy mpr_policy = MprPolicy::Classic;
  PathPolicy path_policy = PathPolicy::ShortestHop;
  EstimationMode estimation_mode = EstimationMode::Realistic;

  bool operator==(const ProtocolParams&) const = default;
};

/// Every violated invariant, as a human-readable message. Empty means valid.
std::vector<std::string> validate_params(const ProtocolParams& p);

/// Named points of the variant matrix.
struct VariantConfig {
  MprPolicy mpr_policy = MprPolicy::Classic;
  PathPolicy path_policy = PathPolicy::ShortestHop;

  static constexpr VariantConfig olsr() { return {MprPolicy::Classic, PathPolicy::ShortestHop}; }
  static constexpr VariantConfig modified_routing() {
    return {MprPolicy::Classic, PathPolicy::BottleneckEnergy};
  }
  static constexpr VariantConfig modified_mpr() {
    return {MprPolicy::EnergyAware, PathPolicy::ShortestHop};
  }
  static constexpr VariantConfig eolsr() {
    return {MprPolicy::EnergyAware, PathPolicy::BottleneckEnergy};
  }

  bool operator==(const VariantConfig&) const = default;
};

std::optional<VariantConfig> parse_variant(std::string_view name);

}  // namespace olsrsim
