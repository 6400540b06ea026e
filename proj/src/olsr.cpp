#include "olsrsim/olsr.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace olsrsim {

std::vector<NodeId> NodeState::symmetric_neighbors() const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : neighbors) {
    if (n.symmetric) out.push_back(id);
  }
  return out;
}

std::set<NodeId> NodeState::mpr_selectors() const {
  std::set<NodeId> out;
  for (const auto& [id, n] : neighbors) {
    if (n.symmetric && n.is_mpr_selector) out.insert(id);
  }
  return out;
}

bool NodeState::is_symmetric_neighbor(NodeId n) const {
  auto it = neighbors.find(n);
  return it != neighbors.end() && it->second.symmetric;
}

namespace {

using LinkKey = std::pair<NodeId, NodeId>;

std::vector<LinkKey> neighborhood_key(const NodeState& s) {
  std::vector<LinkKey> key;
  for (const auto& [id, n] : s.neighbors) {
    key.emplace_back(id, NodeId{n.symmetric ? 1u : 0u});
  }
  for (const auto& t : s.two_hop) key.emplace_back(t.via, t.target);
  return key;
}

std::vector<LinkKey> topology_key(const NodeState& s) {
  std::vector<LinkKey> key;
  key.reserve(s.topology.size());
  for (const auto& t : s.topology) key.emplace_back(t.last_hop, t.dest);
  return key;
}

void refresh_hop_routes(NodeState& s) {
  s.routes = compute_routing_table(s, PathPolicy::ShortestHop);
}

std::size_t node_span(const NodeState& s) {
  std::uint32_t hi = index(s.self);
  for (const auto& [id, n] : s.neighbors) hi = std::max(hi, index(id));
  for (const auto& t : s.two_hop) hi = std::max({hi, index(t.via), index(t.target)});
  for (const auto& t : s.topology) hi = std::max({hi, index(t.last_hop), index(t.dest)});
  return static_cast<std::size_t>(hi) + 1;
}

bool is_symmetric_status(LinkStatus st) {
  return st == LinkStatus::Symmetric || st == LinkStatus::Mpr;
}

void forget_unreachable(NodeState& s) {
  std::set<NodeId> known;
  for (const auto& [id, n] : s.neighbors) known.insert(id);
  for (const auto& t : s.two_hop) known.insert(t.target);
  for (const auto& t : s.topology) {
    known.insert(t.last_hop);
    known.insert(t.dest);
  }
  for (NodeId subject : s.energy.subjects()) {
    if (!known.contains(subject)) s.energy.mark_unreachable(subject);
  }
}

}  // namespace

void recompute_mprs(NodeState& state, const ProtocolParams& params, const EnergyLookup& energy) {
  if (params.mpr_policy == MprPolicy::EnergyAware && energy) {
    state.mprs = select_mprs_energy(state.neighbors, state.two_hop, params.mpr_coverage, energy);
  } else {
    state.mprs = select_mprs_classic(state.neighbors, state.two_hop, params.mpr_coverage);
  }
  for (auto& [id, n] : state.neighbors) n.is_mpr = state.mprs.contains(id);
}

HelloOutcome process_hello(NodeState& state, const Message& msg, NodeId sender, SimTime now,
                           const ProtocolParams& params, const EnergyLookup& energy) {
  const auto& hello = msg.hello();
  for (const auto& e : hello.neighbors) {
    if (e.neighbor == sender) {
      ++state.malformed_dropped;
      return {};
    }
  }

  const auto before = neighborhood_key(state);

  std::optional<LinkStatus> listed;
  std::uint32_t degree = 0;
  for (const auto& e : hello.neighbors) {
    if (e.neighbor == state.self) listed = e.status;
    if (is_symmetric_status(e.status)) ++degree;
  }

  auto& nb = state.neighbors[sender];
  nb.neighbor = sender;
  nb.symmetric = listed.has_value();
  nb.expires = now + params.neighbor_hold_time;
  nb.is_mpr_selector = listed == LinkStatus::Mpr;
  nb.last_reported_energy = hello.reported_energy;
  nb.degree = degree;

  auto& th = state.two_hop;
  std::erase_if(th, [&](const TwoHopTuple& t) {
    return t.via == sender || (nb.symmetric && t.target == sender);
  });
  if (nb.symmetric) {
    for (const auto& e : hello.neighbors) {
      if (!is_symmetric_status(e.status) || e.neighbor == state.self) continue;
      if (state.is_symmetric_neighbor(e.neighbor)) continue;
      th.push_back({sender, e.neighbor, now + params.neighbor_hold_time});
    }
    std::sort(th.begin(), th.end(), [](const TwoHopTuple& a, const TwoHopTuple& b) {
      return std::tie(a.via, a.target) < std::tie(b.via, b.target);
    });
  }

  state.energy.record_report(
      {sender, hello.reported_energy.as_joules(), msg.emitted_at, now});

  HelloOutcome out{true, neighborhood_key(state) != before};
  if (out.neighborhood_changed) {
    ++state.topology_version;
    recompute_mprs(state, params, energy);
    refresh_hop_routes(state);
  }
  return out;
}

TcOutcome process_tc(NodeState& state, const Message& msg, NodeId sender, SimTime now,
                     const ProtocolParams& params) {
  if (msg.originator == state.self) return {true, false};

  auto sender_selected_us = [&] {
    auto it = state.neighbors.find(sender);
    return it != state.neighbors.end() && it->second.symmetric && it->second.is_mpr_selector;
  };

  const auto key = std::make_pair(msg.originator, msg.seq);
  if (auto it = state.duplicates.find(key); it != state.duplicates.end()) {
    if (it->second.retransmitted) return {true, false};
    bool forward = sender_selected_us();
    if (forward) it->second.retransmitted = true;
    return {true, forward};
  }

  auto& dup = state.duplicates[key];
  dup = {msg.originator, msg.seq, false, now + kDuplicateHoldTime};

  const auto& tc = msg.tc();
  auto& topo = state.topology;
  const bool stale = std::any_of(topo.begin(), topo.end(), [&](const TopologyTuple& t) {
    return t.last_hop == msg.originator && t.ansn > tc.ansn;
  });
  if (!stale) {
    const auto before = topology_key(state);
    std::erase_if(topo, [&](const TopologyTuple& t) {
      return t.last_hop == msg.originator && t.ansn < tc.ansn;
    });
    for (NodeId dest : tc.advertised) {
      if (dest == state.self) continue;
      auto it = std::find_if(topo.begin(), topo.end(), [&](const TopologyTuple& t) {
        return t.last_hop == msg.originator && t.dest == dest;
      });
      if (it != topo.end()) {
        it->expires = now + params.topology_hold_time;
      } else {
        topo.push_back({dest, msg.originator, tc.ansn, now + params.topology_hold_time});
      }
    }
    std::sort(topo.begin(), topo.end(), [](const TopologyTuple& a, const TopologyTuple& b) {
      return std::tie(a.last_hop, a.dest) < std::tie(b.last_hop, b.dest);
    });
    if (topology_key(state) != before) {
      ++state.topology_version;
      refresh_hop_routes(state);
    }
  }

  state.energy.record_report({msg.originator, tc.reported_energy.as_joules(), msg.emitted_at, now});

  bool forward = sender_selected_us();
  if (forward) dup.retransmitted = true;
  return {false, forward};
}

Message generate_hello(NodeState& state, SimTime now, Energy actual_energy) {
  HelloBody body;
  body.reported_energy = actual_energy;
  for (const auto& [id, n] : state.neighbors) {
    LinkStatus st = LinkStatus::Heard;
    if (state.mprs.contains(id)) {
      st = LinkStatus::Mpr;
    } else if (n.symmetric) {
      st = LinkStatus::Symmetric;
    }
    body.neighbors.push_back({id, st});
  }
  state.energy.record_own(now, actual_energy);
  return Message{state.self, ++state.hello_seq, now, std::move(body)};
}

std::optional<Message> generate_tc(NodeState& state, SimTime now, Energy actual_energy,
                                   const ProtocolParams& params) {
  std::set<NodeId> adv = state.mpr_selectors();
  if (params.tc_redundancy == TcRedundancy::SelectorsPlusMprs) {
    adv.insert(state.mprs.begin(), state.mprs.end());
  } else if (params.tc_redundancy == TcRedundancy::AllNeighbors) {
    for (NodeId n : state.symmetric_neighbors()) adv.insert(n);
  }
  std::vector<NodeId> advertised(adv.begin(), adv.end());
  if (advertised != state.last_advertised) {
    ++state.ansn;
    state.last_advertised = advertised;
  }
  if (advertised.empty()) return std::nullopt;
  TcBody body{std::move(advertised), actual_energy, state.ansn};
  return Message{state.self, ++state.tc_seq, now, std::move(body)};
}

bool expire_state(NodeState& state, SimTime now, const ProtocolParams& params,
                  const EnergyLookup& energy) {
  bool removed = false;
  for (auto it = state.neighbors.begin(); it != state.neighbors.end();) {
    if (it->second.expires <= now) {
      const NodeId gone = it->first;
      std::erase_if(state.two_hop, [&](const TwoHopTuple& t) { return t.via == gone; });
      it = state.neighbors.erase(it);
      removed = true;
    } else {
      ++it;
    }
  }
  removed |= std::erase_if(state.two_hop, [&](const TwoHopTuple& t) { return t.expires <= now; }) > 0;
  removed |= std::erase_if(state.topology, [&](const TopologyTuple& t) { return t.expires <= now; }) > 0;
  std::erase_if(state.duplicates, [&](const auto& kv) { return kv.second.expires <= now; });

  if (removed) {
    ++state.topology_version;
    recompute_mprs(state, params, energy);
    refresh_hop_routes(state);
    forget_unreachable(state);
  }
  return removed;
}

AdvertisedGraph advertised_graph(const NodeState& state, const RouteInputs& inputs) {
  AdvertisedGraph g(node_span(state));
  for (const auto& [id, n] : state.neighbors) {
    if (!n.symmetric) continue;
    double bw = inputs.local_link_bandwidth ? inputs.local_link_bandwidth(id)
                                            : inputs.default_bandwidth;
    g.add_edge(state.self, id, bw);
  }
  for (const auto& t : state.two_hop) g.add_edge(t.via, t.target, inputs.default_bandwidth);
  for (const auto& t : state.topology) g.add_edge(t.last_hop, t.dest, inputs.default_bandwidth);
  return g;
}

namespace {

RoutingEntry to_entry(const ScoredPath& p, PathPolicy policy, bool degraded) {
  RoutingEntry e{p.nodes.back(), p.next_hop(), static_cast<std::uint32_t>(p.hops()), HopCount{},
                 degraded};
  switch (policy) {
    case PathPolicy::ShortestHop:
      e.metric = HopCount{e.hops};
      break;
    case PathPolicy::BottleneckEnergy:
      e.metric = BottleneckEnergy{p.bottleneck};
      break;
    case PathPolicy::WidestBandwidth:
      e.metric = BottleneckBandwidth{p.bottleneck};
      break;
  }
  return e;
}

std::vector<std::optional<ScoredPath>> paths_for(const AdvertisedGraph& g, NodeId self,
                                                 std::optional<NodeId> only, PathPolicy policy,
                                                 std::span<const double> energy,
                                                 std::span<const std::uint8_t> mask) {
  if (only) {
    std::vector<std::optional<ScoredPath>> out(g.size());
    if (index(*only) >= g.size()) return out;
    if (policy == PathPolicy::BottleneckEnergy) {
      out[index(*only)] = best_path_bottleneck(g, self, *only, energy, mask);
    } else {
      out[index(*only)] = best_path_widest_bandwidth(g, self, *only, mask);
    }
    return out;
  }
  if (policy == PathPolicy::BottleneckEnergy) return best_paths_bottleneck(g, self, energy, mask);
  return best_paths_widest_bandwidth(g, self, mask);
}

RoutingTable build_table(const NodeState& state, std::optional<NodeId> only, PathPolicy policy,
                         const RouteInputs& inputs) {
  RoutingTable table;
  const auto g = advertised_graph(state, inputs);

  if (policy == PathPolicy::ShortestHop) {
    auto paths = shortest_hop_paths(g, state.self);
    for (const auto& p : paths) {
      if (!p || p->nodes.size() < 2) continue;
      if (only && p->nodes.back() != *only) continue;
      table.emplace(p->nodes.back(), to_entry(*p, policy, false));
    }
    return table;
  }

  std::vector<double> energy(inputs.node_energy.begin(), inputs.node_energy.end());
  energy.resize(g.size(), 0.0);
  const auto mask = avoid_low_energy_filter(energy, inputs.low_energy_threshold);
  auto filtered = paths_for(g, state.self, only, policy, energy, mask);
  std::vector<std::optional<ScoredPath>> fallback;
  for (std::uint32_t d = 0; d < g.size(); ++d) {
    NodeId dest{d};
    if (dest == state.self || (only && dest != *only)) continue;
    if (filtered[d]) {
      table.emplace(dest, to_entry(*filtered[d], policy, false));
      continue;
    }
    if (fallback.empty()) fallback = paths_for(g, state.self, only, policy, energy, {});
    if (fallback[d]) table.emplace(dest, to_entry(*fallback[d], policy, true));
  }
  return table;
}

}  // namespace

RoutingTable compute_routing_table(const NodeState& state, PathPolicy policy,
                                   const RouteInputs& inputs) {
  return build_table(state, std::nullopt, policy, inputs);
}

std::optional<RoutingEntry> route_to(const NodeState& state, NodeId dest, PathPolicy policy,
                                     const RouteInputs& inputs) {
  if (policy == PathPolicy::ShortestHop) {
    auto it = state.routes.find(dest);
    if (it == state.routes.end()) return std::nullopt;
    return it->second;
  }
  auto table = build_table(state, dest, policy, inputs);
  auto it = table.find(dest);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

}  // namespace olsrsim
