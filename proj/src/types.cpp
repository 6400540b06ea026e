#include "olsrsim/types.hpp"

#include <array>
#include <utility>

namespace olsrsim {

SimTime seconds(double s) { return SimTime{std::llround(s * 1000.0)}; }

double to_seconds(SimTime t) { return static_cast<double>(t.count()) / 1000.0; }

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<TcRedundancy, 3> kRedundancyNames{{
    {TcRedundancy::SelectorsOnly, "selectors_only"},
    {TcRedundancy::SelectorsPlusMprs, "selectors_plus_mprs"},
    {TcRedundancy::AllNeighbors, "all_neighbors"},
}};

constexpr NameTable<MprPolicy, 2> kMprNames{{
    {MprPolicy::Classic, "classic"},
    {MprPolicy::EnergyAware, "energy_aware"},
}};

constexpr NameTable<PathPolicy, 3> kPathNames{{
    {PathPolicy::ShortestHop, "shortest_hop"},
    {PathPolicy::BottleneckEnergy, "bottleneck_energy"},
    {PathPolicy::WidestBandwidth, "widest_bandwidth"},
}};

constexpr NameTable<EstimationMode, 4> kModeNames{{
    {EstimationMode::Ideal, "ideal"},
    {EstimationMode::Realistic, "realistic"},
    {EstimationMode::Prediction, "prediction"},
    {EstimationMode::SmartPrediction, "smart_prediction"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "unknown";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(TcRedundancy v) { return name_of(kRedundancyNames, v); }
std::string_view to_string(MprPolicy v) { return name_of(kMprNames, v); }
std::string_view to_string(PathPolicy v) { return name_of(kPathNames, v); }
std::string_view to_string(EstimationMode v) { return name_of(kModeNames, v); }

std::optional<TcRedundancy> parse_tc_redundancy(std::string_view s) {
  return value_of(kRedundancyNames, s);
}
std::optional<MprPolicy> parse_mpr_policy(std::string_view s) { return value_of(kMprNames, s); }
std::optional<PathPolicy> parse_path_policy(std::string_view s) {
  return value_of(kPathNames, s);
}
std::optional<EstimationMode> parse_estimation_mode(std::string_view s) {
  return value_of(kModeNames, s);
}

std::vector<std::string> validate_params(const ProtocolParams& p) {
  std::vector<std::string> errors;
  if (p.hello_interval <= SimTime::zero()) errors.emplace_back("hello_interval must be > 0");
  if (p.tc_interval <= SimTime::zero()) errors.emplace_back("tc_interval must be > 0");
  if (p.mpr_coverage < 1) errors.emplace_back("mpr_coverage must be >= 1");
  if (p.hello_interval > SimTime::zero() && p.neighbor_hold_time < 3 * p.hello_interval) {
    errors.emplace_back("neighbor_hold_time: hold time < 3×interval");
  }
  if (p.tc_interval > SimTime::zero() && p.topology_hold_time < 3 * p.tc_interval) {
    errors.emplace_back("topology_hold_time: hold time < 3×interval");
  }
  return errors;
}

std::optional<VariantConfig> parse_variant(std::string_view name) {
  if (name == "olsr") return VariantConfig::olsr();
  if (name == "modified_routing") return VariantConfig::modified_routing();
  if (name == "modified_mpr") return VariantConfig::modified_mpr();
  if (name == "eolsr" || name == "modified_mpr_routing") return VariantConfig::eolsr();
  return std::nullopt;
}

}  // namespace olsrsim
