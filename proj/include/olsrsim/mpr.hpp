#pragma once

#include <functional>
#include <map>
#include <set>
#include <span>

#include "olsrsim/node_state.hpp"

namespace olsrsim {

/// Perceived residual energy of a neighbor in joules. The caller decides what
/// an unknown neighbor ranks as.
using EnergyLookup = std::function<double(NodeId)>;

/// Greedy MPR heuristic: mandatory picks for targets with at most `coverage`
/// covering neighbors, then repeatedly the neighbor covering most
/// under-covered targets (ties: higher degree, then lower id), then a pruning
/// pass in descending id order.
std::set<NodeId> select_mprs_classic(const std::map<NodeId, NeighborTuple>& neighbors,
                                     std::span<const TwoHopTuple> two_hop, int coverage);

/// Same skeleton with candidates ranked by perceived energy first. Mandatory
/// picks stay mandatory; pruning drops the lowest-energy redundant MPR first.
std::set<NodeId> select_mprs_energy(const std::map<NodeId, NeighborTuple>& neighbors,
                                    std::span<const TwoHopTuple> two_hop, int coverage,
                                    const EnergyLookup& energy);

/// Every strict 2-hop target is covered by at least
/// min(coverage, number of symmetric neighbors covering it) members of `mprs`.
bool mpr_coverage_satisfied(const std::map<NodeId, NeighborTuple>& neighbors,
                            std::span<const TwoHopTuple> two_hop, int coverage,
                            const std::set<NodeId>& mprs);

}  // namespace olsrsim
