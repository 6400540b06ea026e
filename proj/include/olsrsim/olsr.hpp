#pragma once

#include <functional>
#include <optional>
#include <span>

#include "olsrsim/graph.hpp"
#include "olsrsim/message.hpp"
#include "olsrsim/mpr.hpp"
#include "olsrsim/node_state.hpp"

namespace olsrsim {

/// Duplicate tuples outlive the flood they suppress by a wide margin.
inline constexpr SimTime kDuplicateHoldTime{30000};

struct HelloOutcome {
  bool accepted = false;
  bool neighborhood_changed = false;
};

/// Link sensing and 2-hop maintenance from one received Hello. Recomputes the
/// MPR set (per params.mpr_policy, using `energy` for the energy-aware
/// ranking) only when the symmetric neighborhood or the 2-hop set changed.
HelloOutcome process_hello(NodeState& state, const Message& msg, NodeId sender, SimTime now,
                           const ProtocolParams& params, const EnergyLookup& energy = {});

struct TcOutcome {
  bool duplicate = false;
  bool forward = false;
};

/// Topology update plus the MPR forwarding decision. A positive forward
/// decision marks the duplicate tuple as retransmitted.
TcOutcome process_tc(NodeState& state, const Message& msg, NodeId sender, SimTime now,
                     const ProtocolParams& params);

Message generate_hello(NodeState& state, SimTime now, Energy actual_energy);

/// nullopt when the advertised set for the configured redundancy is empty.
std::optional<Message> generate_tc(NodeState& state, SimTime now, Energy actual_energy,
                                   const ProtocolParams& params);

/// Recompute the MPR set and the per-neighbor is_mpr flags.
void recompute_mprs(NodeState& state, const ProtocolParams& params, const EnergyLookup& energy);

/// Drop every tuple with expires <= now. Returns true if a neighbor, 2-hop
/// or topology tuple went away, in which case MPRs and the hop-count table
/// have been recomputed and forgotten subjects marked unreachable.
bool expire_state(NodeState& state, SimTime now, const ProtocolParams& params,
                  const EnergyLookup& energy = {});

/// Inputs for the energy- and bandwidth-aware policies.
struct RouteInputs {
  std::span<const double> node_energy;  // perceived joules, index = node id
  double low_energy_threshold = 0.0;
  /// Available bandwidth of the local link to a symmetric neighbor.
  std::function<double(NodeId)> local_link_bandwidth;
  /// Bandwidth assumed for links learned from Hello/TC.
  double default_bandwidth = 0.0;
};

/// The observer's current topology view as a graph.
AdvertisedGraph advertised_graph(const NodeState& state, const RouteInputs& inputs = {});

RoutingTable compute_routing_table(const NodeState& state, PathPolicy policy,
                                   const RouteInputs& inputs = {});

/// Single-destination lookup with the same semantics as compute_routing_table.
std::optional<RoutingEntry> route_to(const NodeState& state, NodeId dest, PathPolicy policy,
                                     const RouteInputs& inputs = {});

}  // namespace olsrsim
