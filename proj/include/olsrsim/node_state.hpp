#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "olsrsim/energy_estimation.hpp"
#include "olsrsim/types.hpp"

namespace olsrsim {

struct NeighborTuple {
  NodeId neighbor{};
  bool symmetric = false;
  SimTime expires{0};
  bool is_mpr = false;
  bool is_mpr_selector = false;
  Energy last_reported_energy;
  std::uint32_t degree = 0;  // neighbor's own symmetric neighbor count

  bool operator==(const NeighborTuple&) const = default;
};

/// Strict 2-hop entry: `target` is neither self nor a symmetric neighbor.
struct TwoHopTuple {
  NodeId via{};
  NodeId target{};
  SimTime expires{0};

  bool operator==(const TwoHopTuple&) const = default;
};

/// `last_hop` (the TC originator) advertises a link to `dest`.
struct TopologyTuple {
  NodeId dest{};
  NodeId last_hop{};
  std::uint32_t ansn = 0;
  SimTime expires{0};

  bool operator==(const TopologyTuple&) const = default;
};

struct DuplicateTuple {
  NodeId originator{};
  std::uint32_t seq = 0;
  bool retransmitted = false;
  SimTime expires{0};

  bool operator==(const DuplicateTuple&) const = default;
};

struct HopCount {
  std::uint32_t hops = 0;
  bool operator==(const HopCount&) const = default;
};
struct BottleneckEnergy {
  double joules = 0.0;
  bool operator==(const BottleneckEnergy&) const = default;
};
struct BottleneckBandwidth {
  double bits_per_second = 0.0;
  bool operator==(const BottleneckBandwidth&) const = default;
};
using PathMetric = std::variant<HopCount, BottleneckEnergy, BottleneckBandwidth>;

struct RoutingEntry {
  NodeId dest{};
  NodeId next_hop{};
  std::uint32_t hops = 0;
  PathMetric metric;
  bool degraded = false;  // low-energy filter had to be dropped to reach dest

  bool operator==(const RoutingEntry&) const = default;
};

using RoutingTable = std::map<NodeId, RoutingEntry>;

/// All repositories of one node.
struct NodeState {
  explicit NodeState(NodeId self_id = {}) : self(self_id), energy(self_id) {}

  NodeId self{};
  std::map<NodeId, NeighborTuple> neighbors;
  std::vector<TwoHopTuple> two_hop;  // sorted by (via, target)
  std::set<NodeId> mprs;
  std::vector<TopologyTuple> topology;  // sorted by (last_hop, dest)
  std::map<std::pair<NodeId, std::uint32_t>, DuplicateTuple> duplicates;
  PerceivedEnergyRepo energy;

  std::uint32_t hello_seq = 0;
  std::uint32_t tc_seq = 0;
  std::uint32_t ansn = 0;
  std::vector<NodeId> last_advertised;

  RoutingTable routes;  // hop-count table maintained by the state machine
  std::uint64_t malformed_dropped = 0;
  /// Bumped on any change to the neighbor, 2-hop or topology sets.
  std::uint64_t topology_version = 0;

  std::vector<NodeId> symmetric_neighbors() const;
  std::set<NodeId> mpr_selectors() const;
  bool is_symmetric_neighbor(NodeId n) const;
};

}  // namespace olsrsim
