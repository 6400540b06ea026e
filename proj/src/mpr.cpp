#include "olsrsim/mpr.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace olsrsim {

namespace {

struct CoverageProblem {
  std::map<NodeId, std::vector<NodeId>> covers;   // target -> covering neighbors
  std::map<NodeId, std::vector<NodeId>> reaches;  // neighbor -> targets it covers
  std::map<NodeId, int> required;
};

CoverageProblem build_problem(const std::map<NodeId, NeighborTuple>& neighbors,
                              std::span<const TwoHopTuple> two_hop, int coverage) {
  CoverageProblem p;
  auto symmetric = [&](NodeId n) {
    auto it = neighbors.find(n);
    return it != neighbors.end() && it->second.symmetric;
  };
  for (const auto& t : two_hop) {
    if (!symmetric(t.via) || symmetric(t.target)) continue;
    auto& c = p.covers[t.target];
    if (std::find(c.begin(), c.end(), t.via) != c.end()) continue;
    c.push_back(t.via);
    p.reaches[t.via].push_back(t.target);
  }
  for (auto& [target, c] : p.covers) {
    std::sort(c.begin(), c.end());
    p.required[target] = std::min<int>(coverage, static_cast<int>(c.size()));
  }
  return p;
}

std::uint32_t degree_of(const std::map<NodeId, NeighborTuple>& neighbors, NodeId n) {
  auto it = neighbors.find(n);
  return it == neighbors.end() ? 0 : it->second.degree;
}

class Selection {
 public:
  explicit Selection(const CoverageProblem& p) : p_(p) {
    for (const auto& [target, req] : p.required) count_[target] = 0;
  }

  void add(NodeId v) {
    if (!chosen_.insert(v).second) return;
    for (NodeId t : reach(v)) ++count_[t];
  }

  void remove(NodeId v) {
    if (chosen_.erase(v) == 0) return;
    for (NodeId t : reach(v)) --count_[t];
  }

  int gain(NodeId v) const {
    int g = 0;
    for (NodeId t : reach(v)) {
      if (count_.at(t) < p_.required.at(t)) ++g;
    }
    return g;
  }

  bool redundant(NodeId v) const {
    for (NodeId t : reach(v)) {
      if (count_.at(t) - 1 < p_.required.at(t)) return false;
    }
    return true;
  }

  bool complete() const {
    for (const auto& [target, req] : p_.required) {
      if (count_.at(target) < req) return false;
    }
    return true;
  }

  const std::set<NodeId>& chosen() const { return chosen_; }

 private:
  std::span<const NodeId> reach(NodeId v) const {
    auto it = p_.reaches.find(v);
    if (it == p_.reaches.end()) return {};
    return it->second;
  }

  const CoverageProblem& p_;
  std::set<NodeId> chosen_;
  std::map<NodeId, int> count_;
};

void add_mandatory(const CoverageProblem& p, int coverage, Selection& sel) {
  for (const auto& [target, c] : p.covers) {
    if (static_cast<int>(c.size()) <= coverage) {
      for (NodeId v : c) sel.add(v);
    }
  }
}

/// Runs the greedy loop; `better(a, b)` orders two candidates with equal
/// eligibility, given their gains.
template <typename Better>
void greedy_fill(const CoverageProblem& p, Selection& sel, Better better) {
  while (!sel.complete()) {
    std::optional<NodeId> best;
    int best_gain = 0;
    for (const auto& [v, targets] : p.reaches) {
      if (sel.chosen().contains(v)) continue;
      int g = sel.gain(v);
      if (g == 0) continue;
      if (!best || better(v, g, *best, best_gain)) {
        best = v;
        best_gain = g;
      }
    }
    if (!best) break;  // unreachable when inputs are consistent
    sel.add(*best);
  }
}

}  // namespace

std::set<NodeId> select_mprs_classic(const std::map<NodeId, NeighborTuple>& neighbors,
                                     std::span<const TwoHopTuple> two_hop, int coverage) {
  auto p = build_problem(neighbors, two_hop, coverage);
  Selection sel(p);
  add_mandatory(p, coverage, sel);
  greedy_fill(p, sel, [&](NodeId a, int ga, NodeId b, int gb) {
    auto key = [&](NodeId n, int g) {
      return std::make_tuple(g, degree_of(neighbors, n), -static_cast<std::int64_t>(index(n)));
    };
    return key(a, ga) > key(b, gb);
  });

  std::vector<NodeId> order(sel.chosen().rbegin(), sel.chosen().rend());
  for (NodeId v : order) {
    if (sel.redundant(v)) sel.remove(v);
  }
  return sel.chosen();
}

std::set<NodeId> select_mprs_energy(const std::map<NodeId, NeighborTuple>& neighbors,
                                    std::span<const TwoHopTuple> two_hop, int coverage,
                                    const EnergyLookup& energy) {
  auto p = build_problem(neighbors, two_hop, coverage);
  std::map<NodeId, double> e;
  for (const auto& [v, targets] : p.reaches) e[v] = energy(v);

  Selection sel(p);
  add_mandatory(p, coverage, sel);
  greedy_fill(p, sel, [&](NodeId a, int ga, NodeId b, int gb) {
    auto key = [&](NodeId n, int g) {
      return std::make_tuple(e.at(n), g, degree_of(neighbors, n),
                             -static_cast<std::int64_t>(index(n)));
    };
    return key(a, ga) > key(b, gb);
  });

  for (;;) {
    std::optional<NodeId> victim;
    for (NodeId v : sel.chosen()) {
      if (!sel.redundant(v)) continue;
      // Lowest energy first; on equal energy the higher id goes first.
      if (!victim || e.at(v) < e.at(*victim) || (e.at(v) == e.at(*victim) && v > *victim)) {
        victim = v;
      }
    }
    if (!victim) break;
    sel.remove(*victim);
  }
  return sel.chosen();
}

bool mpr_coverage_satisfied(const std::map<NodeId, NeighborTuple>& neighbors,
                            std::span<const TwoHopTuple> two_hop, int coverage,
                            const std::set<NodeId>& mprs) {
  auto p = build_problem(neighbors, two_hop, coverage);
  for (const auto& [target, c] : p.covers) {
    int have = 0;
    for (NodeId v : c) have += mprs.contains(v) ? 1 : 0;
    if (have < p.required.at(target)) return false;
  }
  for (NodeId m : mprs) {
    auto it = neighbors.find(m);
    if (it == neighbors.end() || !it->second.symmetric) return false;
  }
  return true;
}

}  // namespace olsrsim
