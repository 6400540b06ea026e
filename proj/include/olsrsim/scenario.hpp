#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "olsrsim/types.hpp"

namespace olsrsim {

struct Position {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

struct RadioConfig {
  double range = 250.0;  // meters, unit disk
  SimTime propagation_delay{1};
  double base_loss = 0.0;
  double nominal_bandwidth = 2e6;       // bits/s of a short link
  double default_link_bandwidth = 1e6;  // assumed for links learned second-hand
};

enum class MobilityKind { Static, RandomWaypoint };

struct MobilityConfig {
  MobilityKind kind = MobilityKind::Static;
  double min_speed = 1.0;  // m/s
  double max_speed = 5.0;
  SimTime pause = seconds(10.0);
};

struct EnergyConfig {
  Energy initial = Energy::joules(100.0);
  Energy tx_per_packet = Energy::joules(0.02);
  Energy rx_per_packet = Energy::joules(0.01);
  /// Per second; must be a whole number of microjoules so per-millisecond
  /// debits stay exact.
  Energy idle_per_second = Energy::joules(0.001);
  /// Fraction of `initial` below which relays are avoided.
  double low_energy_threshold = 0.1;
};

struct QueueConfig {
  std::uint32_t capacity = 50;  // frames, including the one in service
  double service_rate = 100.0;  // frames/s

  SimTime service_time() const;
};

struct FlowConfig {
  NodeId source{};
  NodeId destination{};
  SimTime packet_interval = seconds(1.0);
  std::uint32_t payload = 512;  // bytes
  SimTime start = seconds(10.0);
  std::optional<SimTime> stop;  // defaults to the horizon

  bool operator==(const FlowConfig&) const = default;
};

/// CBR flows between seeded random distinct endpoint pairs.
struct RandomTraffic {
  std::uint32_t count = 0;
  SimTime packet_interval = seconds(1.0);
  std::uint32_t payload = 512;
  SimTime start = seconds(10.0);
  std::optional<SimTime> stop;
};

struct ScenarioConfig {
  std::string id = "scenario";
  std::uint32_t node_count = 30;
  double width = 1000.0;
  double height = 1000.0;
  std::vector<Position> positions;  // empty: seeded uniform placement
  bool require_connected = true;

  RadioConfig radio;
  MobilityConfig mobility;
  EnergyConfig energy;
  QueueConfig queue;
  ProtocolParams protocol;

  std::vector<FlowConfig> flows;
  RandomTraffic random_traffic;
  bool piggyback_energy_on_data = true;
  std::uint8_t data_ttl = 32;
  double hello_jitter = 0.1;  // fraction of the interval, uniform +/-

  SimTime horizon = seconds(300.0);
  SimTime sample_interval = seconds(5.0);
};

/// All violations, protocol parameters included. Empty means runnable.
std::vector<std::string> validate_scenario(const ScenarioConfig& s);

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse the JSON scenario format. Unknown keys and type mismatches throw
/// ScenarioError; semantic checks are left to validate_scenario.
ScenarioConfig parse_scenario_json(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Canonical JSON with every field written out.
std::string scenario_to_json(const ScenarioConfig& s, int indent = 2);

}  // namespace olsrsim
