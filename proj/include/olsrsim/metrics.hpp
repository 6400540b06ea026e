#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "olsrsim/energy_estimation.hpp"
#include "olsrsim/types.hpp"

namespace olsrsim {

/// Per-node state at one sample time.
struct SampleRow {
  SimTime time{0};
  NodeId node{};
  Energy actual;
  bool alive = true;
  /// Mean normalized error of other nodes' beliefs about this node; 0 when
  /// nobody holds a report.
  double mean_perceived_error = 0.0;
};

struct Counters {
  std::uint64_t hello_sent = 0;
  std::uint64_t tc_sent = 0;
  std::uint64_t tc_forwarded = 0;
  std::uint64_t data_forwarded = 0;
  std::uint64_t frames_serviced = 0;
  std::uint64_t queue_drops = 0;
  std::uint64_t loss_drops = 0;
  std::uint64_t link_breaks = 0;
  std::uint64_t routing_failures = 0;
  std::uint64_t ttl_drops = 0;
  std::uint64_t dead_sender_discards = 0;
  std::uint64_t malformed_dropped = 0;
  std::uint64_t perceptions = 0;
  std::uint64_t adjusted_perceptions = 0;
};

/// Conservation bookkeeping for one node.
struct EnergyAudit {
  NodeId node{};
  Energy initial;
  Energy residual;
  Energy idle_requested;
  std::uint64_t tx_frames = 0;
  std::uint64_t rx_frames = 0;
  Energy shortfall;  // part of the final debit that exceeded the battery
  bool balanced = false;
};

struct MetricsRecord {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  double mean_inaccuracy = 0.0;  // pooled over every sample of the run
  std::uint64_t inaccuracy_samples = 0;
  std::optional<SimTime> first_node_death;
  SimTime ended_at{0};
  std::vector<SampleRow> samples;
  std::vector<InaccuracySample> inaccuracy_rows;  // only when requested
  Counters counters;
  std::vector<EnergyAudit> audit;

  double adjustment_fraction() const {
    return counters.perceptions == 0
               ? 0.0
               : static_cast<double>(counters.adjusted_perceptions) /
                     static_cast<double>(counters.perceptions);
  }
};

}  // namespace olsrsim
