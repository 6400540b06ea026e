#include "olsrsim/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <utility>

namespace olsrsim {

void AdvertisedGraph::add_edge(NodeId from, NodeId to, double bandwidth) {
  if (from == to) return;
  auto need = static_cast<std::size_t>(std::max(index(from), index(to))) + 1;
  if (out_.size() < need) out_.resize(need);
  auto& edges = out_[index(from)];
  auto it = std::lower_bound(edges.begin(), edges.end(), to,
                             [](const Edge& e, NodeId id) { return e.to < id; });
  if (it != edges.end() && it->to == to) return;
  edges.insert(it, Edge{to, bandwidth});
}

void AdvertisedGraph::add_link(const LinkState& link) {
  add_edge(link.a, link.b, link.available_bandwidth);
  if (link.symmetric) add_edge(link.b, link.a, link.available_bandwidth);
}

bool AdvertisedGraph::has_edge(NodeId from, NodeId to) const {
  if (index(from) >= out_.size()) return false;
  const auto& edges = out_[index(from)];
  return std::binary_search(edges.begin(), edges.end(), Edge{to, 0.0},
                            [](const Edge& a, const Edge& b) { return a.to < b.to; });
}

std::size_t AdvertisedGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& edges : out_) n += edges.size();
  return n;
}

bool ranks_before(const ScoredPath& a, const ScoredPath& b) {
  if (a.bottleneck != b.bottleneck) return a.bottleneck > b.bottleneck;
  if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
  return a.nodes < b.nodes;
}

namespace {

bool allowed_interior(std::span<const std::uint8_t> mask, NodeId n) {
  return mask.empty() || index(n) >= mask.size() || mask[index(n)];
}

std::vector<NodeId> unwind(const std::vector<std::int64_t>& parent, NodeId src, NodeId dst) {
  std::vector<NodeId> path;
  for (auto at = static_cast<std::int64_t>(index(dst)); at != -1; at = parent[at]) {
    path.push_back(NodeId{static_cast<std::uint32_t>(at)});
    if (NodeId{static_cast<std::uint32_t>(at)} == src) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

/// Breadth-first search that visits neighbours in ascending id order, which
/// makes the first discovery of every node the lexicographically smallest
/// among its hop-minimal paths. `expandable(u)` gates interior nodes and
/// `edge_ok(u, e)` gates individual edges. Stops early once `stop_at` is seen.
template <typename Expandable, typename EdgeOk>
std::vector<std::int64_t> lex_bfs(const AdvertisedGraph& g, NodeId src,
                                  std::optional<NodeId> stop_at, Expandable expandable,
                                  EdgeOk edge_ok) {
  std::vector<std::int64_t> parent(g.size(), -1);
  std::vector<bool> seen(g.size(), false);
  std::deque<NodeId> frontier{src};
  seen[index(src)] = true;
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop_front();
    if (u != src && !expandable(u)) continue;
    for (const auto& e : g.out(u)) {
      if (seen[index(e.to)] || !edge_ok(u, e)) continue;
      seen[index(e.to)] = true;
      parent[index(e.to)] = index(u);
      if (stop_at && e.to == *stop_at) return parent;
      frontier.push_back(e.to);
    }
  }
  return parent;
}

/// Max-min labels: label[v] is the best achievable bottleneck over paths from
/// src to v, where `width(u, e)` is the constraint imposed by stepping along e.
template <typename Width>
std::vector<double> widest_labels(const AdvertisedGraph& g, NodeId src,
                                  std::span<const std::uint8_t> interior_allowed, Width width) {
  constexpr double kUnreached = -kUnbounded;
  std::vector<double> label(g.size(), kUnreached);
  std::vector<bool> done(g.size(), false);
  using Item = std::pair<double, std::uint32_t>;
  // Largest label first; among equals the smaller id, for reproducibility.
  auto cmp = [](const Item& a, const Item& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  label[index(src)] = kUnbounded;
  heap.push({kUnbounded, index(src)});
  while (!heap.empty()) {
    auto [value, id] = heap.top();
    heap.pop();
    if (done[id]) continue;
    done[id] = true;
    NodeId u{id};
    if (u != src && !allowed_interior(interior_allowed, u)) continue;
    for (const auto& e : g.out(u)) {
      double cand = std::min(value, width(u, e));
      if (cand > label[index(e.to)]) {
        label[index(e.to)] = cand;
        heap.push({cand, index(e.to)});
      }
    }
  }
  return label;
}

template <typename Width, typename Admissible>
std::vector<std::optional<ScoredPath>> widest_paths(const AdvertisedGraph& g, NodeId src,
                                                    std::optional<NodeId> only,
                                                    std::span<const std::uint8_t> interior_allowed,
                                                    Width width, Admissible admissible) {
  std::vector<std::optional<ScoredPath>> out(g.size());
  if (index(src) >= g.size()) return out;
  auto label = widest_labels(g, src, interior_allowed, width);
  for (std::uint32_t d = 0; d < g.size(); ++d) {
    NodeId dst{d};
    if (dst == src || (only && *only != dst) || label[d] == -kUnbounded) continue;
    const double target = label[d];
    // Every path whose bottleneck reaches the optimum; pick hop-minimal,
    // lexicographically smallest among them.
    auto parent = lex_bfs(
        g, src, dst,
        [&](NodeId u) { return allowed_interior(interior_allowed, u) && admissible(u, target); },
        [&](NodeId u, const AdvertisedGraph::Edge& e) { return width(u, e) >= target; });
    if (parent[d] == -1) continue;
    out[d] = ScoredPath{unwind(parent, src, dst), target};
  }
  return out;
}

}  // namespace

std::vector<std::optional<ScoredPath>> shortest_hop_paths(const AdvertisedGraph& g, NodeId src) {
  std::vector<std::optional<ScoredPath>> out(g.size());
  if (index(src) >= g.size()) return out;
  auto parent = lex_bfs(
      g, src, std::nullopt, [](NodeId) { return true; },
      [](NodeId, const AdvertisedGraph::Edge&) { return true; });
  for (std::uint32_t d = 0; d < g.size(); ++d) {
    if (parent[d] == -1) continue;
    out[d] = ScoredPath{unwind(parent, src, NodeId{d}), kUnbounded};
  }
  return out;
}

std::vector<std::optional<ScoredPath>> best_paths_bottleneck(const AdvertisedGraph& g, NodeId src,
                                                             std::span<const double> node_energy,
                                                             std::span<const std::uint8_t> interior_allowed) {
  auto energy_of = [&](NodeId n) {
    return index(n) < node_energy.size() ? node_energy[index(n)] : 0.0;
  };
  return widest_paths(
      g, src, std::nullopt, interior_allowed,
      [&](NodeId u, const AdvertisedGraph::Edge&) { return u == src ? kUnbounded : energy_of(u); },
      [&](NodeId u, double target) { return energy_of(u) >= target; });
}

std::optional<ScoredPath> best_path_bottleneck(const AdvertisedGraph& g, NodeId src, NodeId dst,
                                               std::span<const double> node_energy,
                                               std::span<const std::uint8_t> interior_allowed) {
  if (src == dst || index(dst) >= g.size()) return std::nullopt;
  auto energy_of = [&](NodeId n) {
    return index(n) < node_energy.size() ? node_energy[index(n)] : 0.0;
  };
  auto all = widest_paths(
      g, src, dst, interior_allowed,
      [&](NodeId u, const AdvertisedGraph::Edge&) { return u == src ? kUnbounded : energy_of(u); },
      [&](NodeId u, double target) { return energy_of(u) >= target; });
  return std::move(all[index(dst)]);
}

std::vector<std::optional<ScoredPath>> best_paths_widest_bandwidth(
    const AdvertisedGraph& g, NodeId src, std::span<const std::uint8_t> interior_allowed) {
  return widest_paths(
      g, src, std::nullopt, interior_allowed,
      [](NodeId, const AdvertisedGraph::Edge& e) { return e.bandwidth; },
      [](NodeId, double) { return true; });
}

std::optional<ScoredPath> best_path_widest_bandwidth(const AdvertisedGraph& g, NodeId src,
                                                     NodeId dst,
                                                     std::span<const std::uint8_t> interior_allowed) {
  if (src == dst || index(dst) >= g.size()) return std::nullopt;
  auto all = widest_paths(
      g, src, dst, interior_allowed,
      [](NodeId, const AdvertisedGraph::Edge& e) { return e.bandwidth; },
      [](NodeId, double) { return true; });
  return std::move(all[index(dst)]);
}

std::vector<std::uint8_t> avoid_low_energy_filter(std::span<const double> node_energy, double threshold) {
  std::vector<std::uint8_t> keep(node_energy.size());
  for (std::size_t i = 0; i < node_energy.size(); ++i) keep[i] = !(node_energy[i] < threshold);
  return keep;
}

}  // namespace olsrsim
