#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "olsrsim/types.hpp"

namespace olsrsim {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Bandwidth view of one advertised link.
struct LinkState {
  NodeId a{};
  NodeId b{};
  bool symmetric = true;
  double nominal_bandwidth = 0.0;    // bits/s
  double available_bandwidth = 0.0;  // bits/s, <= nominal

  bool operator==(const LinkState&) const = default;
};

/// Directed graph over dense node ids as known by one observer: its own
/// symmetric links, the links its neighbors announce, and TC-advertised links.
/// Out-edges are kept sorted by target id so searches are deterministic.
class AdvertisedGraph {
 public:
  struct Edge {
    NodeId to{};
    double bandwidth = 0.0;
  };

  explicit AdvertisedGraph(std::size_t node_count = 0) : out_(node_count) {}

  std::size_t size() const { return out_.size(); }

  /// First insertion of a (from, to) pair wins; later duplicates are ignored.
  void add_edge(NodeId from, NodeId to, double bandwidth = 0.0);
  void add_link(const LinkState& link);

  std::span<const Edge> out(NodeId n) const { return out_[index(n)]; }
  bool has_edge(NodeId from, NodeId to) const;
  std::size_t edge_count() const;

 private:
  std::vector<std::vector<Edge>> out_;
};

/// A concrete path with its bottleneck value. For hop-count routing the
/// bottleneck is left unbounded.
struct ScoredPath {
  std::vector<NodeId> nodes;  // src first, dst last
  double bottleneck = kUnbounded;

  std::size_t hops() const { return nodes.size() - 1; }
  NodeId next_hop() const { return nodes[1]; }

  bool operator==(const ScoredPath&) const = default;
};

/// Lexicographic path ranking: larger bottleneck, then fewer hops, then the
/// lexicographically smaller node sequence. True iff `a` ranks strictly first.
bool ranks_before(const ScoredPath& a, const ScoredPath& b);

/// Hop-minimal paths from `src` to every reachable node; ties go to the
/// lexicographically smallest node sequence. Index = destination id.
std::vector<std::optional<ScoredPath>> shortest_hop_paths(const AdvertisedGraph& g, NodeId src);

/// Path maximising the minimum residual energy over interior nodes.
/// `node_energy[i]` is the energy of node i (joules). `interior_allowed`, when
/// non-empty, masks nodes that may not appear in a path interior.
std::optional<ScoredPath> best_path_bottleneck(const AdvertisedGraph& g, NodeId src, NodeId dst,
                                               std::span<const double> node_energy,
                                               std::span<const std::uint8_t> interior_allowed = {});

/// best_path_bottleneck for every destination at once.
std::vector<std::optional<ScoredPath>> best_paths_bottleneck(
    const AdvertisedGraph& g, NodeId src, std::span<const double> node_energy,
    std::span<const std::uint8_t> interior_allowed = {});

/// Path maximising the minimum link bandwidth.
std::optional<ScoredPath> best_path_widest_bandwidth(const AdvertisedGraph& g, NodeId src,
                                                     NodeId dst,
                                                     std::span<const std::uint8_t> interior_allowed = {});

std::vector<std::optional<ScoredPath>> best_paths_widest_bandwidth(
    const AdvertisedGraph& g, NodeId src, std::span<const std::uint8_t> interior_allowed = {});

/// Interior-eligibility mask: false for nodes whose energy is strictly below
/// `threshold`. Endpoints are exempt at query time, not here.
std::vector<std::uint8_t> avoid_low_energy_filter(std::span<const double> node_energy, double threshold);

}  // namespace olsrsim
