#include <random>

#include "doctest.h"
#include "olsrsim/graph.hpp"
#include "oracles.hpp"

using namespace olsrsim;

namespace {

NodeId id(int i) { return NodeId{static_cast<std::uint32_t>(i)}; }

std::vector<int> as_ints(const std::vector<NodeId>& p) {
  std::vector<int> out;
  for (NodeId n : p) out.push_back(static_cast<int>(index(n)));
  return out;
}

struct RandomGraph {
  AdvertisedGraph graph;
  oracle::Adjacency adj;
  std::vector<std::vector<double>> bw;
  std::vector<double> energy;
};

// Mostly symmetric links with the odd one-way edge; energies and bandwidths
// are drawn from tiny sets so ties are common.
RandomGraph random_graph(std::mt19937_64& g, int n) {
  RandomGraph r{AdvertisedGraph(n), oracle::Adjacency(n), std::vector(n, std::vector(n, 0.0)), {}};
  std::uniform_real_distribution<double> u(0, 1);
  const double density = 0.25 + 0.35 * u(g);
  auto add = [&](int a, int b, double w) {
    r.graph.add_edge(id(a), id(b), w);
    r.adj[a].push_back(b);
    r.bw[a][b] = w;
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (u(g) >= density) continue;
      const double w = 1.0 + static_cast<double>(g() % 3);
      const auto dir = g() % 6;
      if (dir != 0) add(a, b, w);
      if (dir != 1) add(b, a, w);
    }
  }
  for (auto& row : r.adj) std::sort(row.begin(), row.end());
  for (int i = 0; i < n; ++i) r.energy.push_back(static_cast<double>(g() % 4) * 10.0);
  return r;
}

std::optional<double> interior_min(const std::vector<int>& p, const std::vector<double>& energy,
                                   const std::vector<std::uint8_t>& mask) {
  double lo = kUnbounded;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (!mask.empty() && !mask[p[i]]) return std::nullopt;
    lo = std::min(lo, energy[p[i]]);
  }
  return lo;
}

}  // namespace

TEST_CASE("shortest_hop_paths agrees with BFS and picks the smallest sequence") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(g() % 7);
    auto r = random_graph(g, n);
    const auto paths = shortest_hop_paths(r.graph, id(0));
    const auto dist = oracle::bfs_distances(r.adj, 0);
    for (int d = 1; d < n; ++d) {
      if (dist[d] < 0) {
        CHECK_FALSE(paths[d].has_value());
        continue;
      }
      REQUIRE(paths[d].has_value());
      CHECK(static_cast<int>(paths[d]->hops()) == dist[d]);
      auto best = oracle::best_path(r.adj, 0, d, [](const std::vector<int>&) {
        return std::optional<double>(kUnbounded);
      });
      REQUIRE(best.has_value());
      CHECK(as_ints(paths[d]->nodes) == best->nodes);
    }
  }
}

TEST_CASE("best_path_bottleneck matches exhaustive enumeration") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(g() % 7);
    auto r = random_graph(g, n);
    std::vector<std::uint8_t> mask;
    if (trial % 2) {
      mask = avoid_low_energy_filter(r.energy, 15.0);
    }
    for (int d = 1; d < n; ++d) {
      const auto got = best_path_bottleneck(r.graph, id(0), id(d), r.energy, mask);
      const auto want = oracle::best_path(
          r.adj, 0, d, [&](const std::vector<int>& p) { return interior_min(p, r.energy, mask); });
      REQUIRE(got.has_value() == want.has_value());
      if (!got) continue;
      CHECK(as_ints(got->nodes) == want->nodes);
      CHECK(got->bottleneck == want->bottleneck);
    }
    // The all-destinations variant returns the same answers.
    const auto all = best_paths_bottleneck(r.graph, id(0), r.energy, mask);
    for (int d = 1; d < n; ++d) {
      CHECK(all[d] == best_path_bottleneck(r.graph, id(0), id(d), r.energy, mask));
    }
  }
}

TEST_CASE("best_path_widest_bandwidth matches exhaustive enumeration") {
  std::mt19937_64 g(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(g() % 7);
    auto r = random_graph(g, n);
    for (int d = 1; d < n; ++d) {
      const auto got = best_path_widest_bandwidth(r.graph, id(0), id(d));
      const auto want = oracle::best_path(r.adj, 0, d, [&](const std::vector<int>& p) {
        double lo = kUnbounded;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) lo = std::min(lo, r.bw[p[i]][p[i + 1]]);
        return std::optional<double>(lo);
      });
      REQUIRE(got.has_value() == want.has_value());
      if (!got) continue;
      CHECK(as_ints(got->nodes) == want->nodes);
      CHECK(got->bottleneck == want->bottleneck);
    }
  }
}

TEST_CASE("bottleneck ignores endpoint energy") {
  AdvertisedGraph g(4);
  g.add_edge(id(0), id(1));
  g.add_edge(id(1), id(3));
  g.add_edge(id(0), id(2));
  g.add_edge(id(2), id(3));
  const std::vector<double> energy{0.0, 5.0, 7.0, 0.0};
  auto p = best_path_bottleneck(g, id(0), id(3), energy);
  REQUIRE(p);
  CHECK(as_ints(p->nodes) == std::vector{0, 2, 3});
  CHECK(p->bottleneck == 7.0);
  CHECK(p->next_hop() == id(2));
}

TEST_CASE("equal bottleneck prefers fewer hops, then smaller ids") {
  AdvertisedGraph g(5);
  for (auto [a, b] : {std::pair{0, 1}, {1, 4}, {0, 2}, {2, 4}, {0, 3}, {3, 2}}) {
    g.add_edge(id(a), id(b));
  }
  const std::vector<double> energy{1, 5, 5, 9, 1};
  auto p = best_path_bottleneck(g, id(0), id(4), energy);
  REQUIRE(p);
  CHECK(as_ints(p->nodes) == std::vector{0, 1, 4});
}

TEST_CASE("a masked interior node is never used but endpoints are exempt") {
  AdvertisedGraph g(3);
  g.add_edge(id(0), id(1));
  g.add_edge(id(1), id(2));
  const std::vector<double> energy{0.0, 1.0, 0.0};
  const auto mask = avoid_low_energy_filter(energy, 2.0);
  CHECK(mask == std::vector<std::uint8_t>{0, 0, 0});
  CHECK_FALSE(best_path_bottleneck(g, id(0), id(2), energy, mask).has_value());
  CHECK(best_path_bottleneck(g, id(0), id(1), energy, mask).has_value());
}

TEST_CASE("avoid_low_energy_filter keeps nodes exactly at the threshold") {
  const std::vector<double> energy{0.9, 1.0, 1.1};
  CHECK(avoid_low_energy_filter(energy, 1.0) == std::vector<std::uint8_t>{0, 1, 1});
}

TEST_CASE("duplicate edges keep the first bandwidth") {
  AdvertisedGraph g(2);
  g.add_edge(id(0), id(1), 3.0);
  g.add_edge(id(0), id(1), 9.0);
  g.add_edge(id(0), id(0), 1.0);
  CHECK(g.edge_count() == 1);
  CHECK(g.out(id(0))[0].bandwidth == 3.0);
  g.add_link(LinkState{id(1), id(2), true, 10.0, 4.0});
  CHECK(g.size() == 3);
  CHECK(g.has_edge(id(2), id(1)));
  CHECK(g.out(id(1))[0].bandwidth == 4.0);
}
