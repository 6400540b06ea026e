#pragma once

#include <map>
#include <random>
#include <set>
#include <vector>

#include "olsrsim/node_state.hpp"

namespace fixture {

/// A node's one- and two-hop view: neighbors 1..k, strict 2-hop targets 100..,
/// plus the odd asymmetric neighbor and a 2-hop entry naming a neighbor.
struct Neighborhood {
  std::map<olsrsim::NodeId, olsrsim::NeighborTuple> neighbors;
  std::vector<olsrsim::TwoHopTuple> two_hop;
  std::vector<int> sym;       // symmetric neighbor ids, ascending
  std::vector<int> targets;   // strict 2-hop ids reachable through a symmetric neighbor
  std::map<int, double> energy;
};

inline Neighborhood random_neighborhood(std::mt19937_64& g, int max_neighbors = 12,
                                        int max_targets = 20) {
  using namespace olsrsim;
  Neighborhood h;
  std::uniform_int_distribution<int> nn(1, max_neighbors), nt(0, max_targets);
  const int k = nn(g);
  const int t = nt(g);
  for (int v = 1; v <= k; ++v) {
    NeighborTuple n;
    n.neighbor = NodeId{static_cast<std::uint32_t>(v)};
    n.symmetric = g() % 8 != 0;
    n.degree = static_cast<std::uint32_t>(g() % 6);
    h.neighbors[n.neighbor] = n;
    h.energy[v] = static_cast<double>(g() % 5);
    if (n.symmetric) h.sym.push_back(v);
  }
  for (int j = 0; j < t; ++j) {
    for (int v = 1; v <= k; ++v) {
      if (g() % 4 == 0) {
        h.two_hop.push_back({NodeId{static_cast<std::uint32_t>(v)},
                             NodeId{static_cast<std::uint32_t>(100 + j)}, SimTime{0}});
      }
    }
  }
  if (k >= 2 && g() % 3 == 0) {
    // A neighbor seen through another one: a target only while not symmetric.
    h.two_hop.push_back({NodeId{1}, NodeId{2}, SimTime{0}});
  }
  auto symmetric = [&](NodeId n) {
    auto it = h.neighbors.find(n);
    return it != h.neighbors.end() && it->second.symmetric;
  };
  std::set<int> targets;
  for (const auto& e : h.two_hop) {
    if (symmetric(e.via) && !symmetric(e.target)) {
      targets.insert(static_cast<int>(index(e.target)));
    }
  }
  h.targets.assign(targets.begin(), targets.end());
  return h;
}

}  // namespace fixture
