// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "olsrsim/experiments.hpp"
#include "olsrsim/graph.hpp"
#include "olsrsim/mpr.hpp"
#include "olsrsim/olsr.hpp"
#include "olsrsim/sim.hpp"
#include "oracles.hpp"

using namespace olsrsim;

namespace {

using Clock = std::chrono::steady_clock;

NodeId id(int i) { return NodeId{static_cast<std::uint32_t>(i)}; }

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Gate {
  int failed = 0;
  void report(int n, bool ok, const std::string& name, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", n, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

// Energy audits from every simulated run, checked at the end.
struct AuditTally {
  std::uint64_t runs = 0;
  std::uint64_t nodes = 0;
  std::uint64_t unbalanced = 0;

  void add(const MetricsRecord& m) {
    ++runs;
    for (const auto& a : m.audit) {
      ++nodes;
      if (!a.balanced) ++unbalanced;
    }
  }
  void add(std::span<const CellResult> results) {
    for (const auto& r : results) add(r.metrics);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig load(const char* name) {
  return load_scenario_file((std::filesystem::path(OLSRSIM_SCENARIO_DIR) / name).string());
}

void mpr_coverage(Gate& gate) {
  const auto t0 = Clock::now();
  std::mt19937_64 g(1001);
  int ok = 0;
  const int total = 500;
  for (int i = 0; i < total; ++i) {
    auto h = fixture::random_neighborhood(g, 12, 20);
    const int coverage = 1 + i % 2;
    auto energy = [&h](NodeId n) { return h.energy.at(static_cast<int>(index(n))); };
    const bool classic = mpr_coverage_satisfied(
        h.neighbors, h.two_hop, coverage, select_mprs_classic(h.neighbors, h.two_hop, coverage));
    const bool aware = mpr_coverage_satisfied(
        h.neighbors, h.two_hop, coverage,
        select_mprs_energy(h.neighbors, h.two_hop, coverage, energy));
    ok += classic && aware;
  }
  const double secs = elapsed(t0);
  gate.report(1, ok == total && secs < 10.0, "MPR coverage",
              fmt("%d/%d neighborhoods covered by both selectors, %.2f s", ok, total, secs));
}

void flooding_economy(Gate& gate, AuditTally& audit) {
  const int scenarios = 100;
  int full_reach = 0;
  int cheaper = 0;
  std::uint64_t floods = 0;
  std::uint64_t retrans = 0;
  for (int k = 0; k < scenarios; ++k) {
    ScenarioConfig s;
    s.id = "flood-" + std::to_string(k);
    s.radio.base_loss = 0.0;
    s.horizon = seconds(60);
    Simulator sim(s, 5000 + static_cast<std::uint64_t>(k), SimOptions{false, seconds(30)});
    audit.add(sim.run());
    bool all_reached = true;
    std::uint64_t mpr = 0;
    std::uint64_t blind = 0;
    for (const auto& f : sim.floods()) {
      // Later floods may still be in flight at the horizon.
      if (f.emitted_at > s.horizon - seconds(5)) continue;
      all_reached = all_reached && f.reach_count() == s.node_count;
      mpr += f.retransmissions;
      blind += s.node_count - 1;
      ++floods;
    }
    retrans += mpr;
    full_reach += all_reached && blind > 0;
    cheaper += mpr < blind;
  }
  const bool ok = full_reach == scenarios && cheaper >= 95;
  gate.report(2, ok, "Flooding economy",
              fmt("full reach in %d/%d scenarios, MPR flooding cheaper in %d/%d "
                  "(%llu floods, mean %.2f retransmissions vs 29 blind)",
                  full_reach, scenarios, cheaper, scenarios, static_cast<unsigned long long>(floods),
                  floods ? static_cast<double>(retrans) / static_cast<double>(floods) : 0.0));
}

void oracle_equivalence(Gate& gate) {
  std::mt19937_64 g(2002);
  std::uniform_real_distribution<double> u(0, 1);
  int path_ok = 0;
  int path_total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(g() % 7);
    AdvertisedGraph graph(n);
    oracle::Adjacency adj(n);
    std::vector<std::vector<double>> bw(n, std::vector<double>(n, 0.0));
    const double density = 0.25 + 0.4 * u(g);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b || u(g) >= density) continue;
        const double w = 1.0 + static_cast<double>(g() % 3);
        graph.add_edge(id(a), id(b), w);
        adj[a].push_back(b);
        bw[a][b] = w;
      }
    }
    std::vector<double> energy;
    for (int i = 0; i < n; ++i) energy.push_back(static_cast<double>(g() % 4));
    for (int d = 1; d < n; ++d) {
      const auto be = best_path_bottleneck(graph, id(0), id(d), energy);
      const auto be_want = oracle::best_path(adj, 0, d, [&](const std::vector<int>& p) {
        double lo = kUnbounded;
        for (std::size_t i = 1; i + 1 < p.size(); ++i) lo = std::min(lo, energy[p[i]]);
        return std::optional<double>(lo);
      });
      const auto wb = best_path_widest_bandwidth(graph, id(0), id(d));
      const auto wb_want = oracle::best_path(adj, 0, d, [&](const std::vector<int>& p) {
        double lo = kUnbounded;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) lo = std::min(lo, bw[p[i]][p[i + 1]]);
        return std::optional<double>(lo);
      });
      auto same = [](const std::optional<ScoredPath>& got, const std::optional<oracle::Scored>& want) {
        if (got.has_value() != want.has_value()) return false;
        if (!got) return true;
        std::vector<int> nodes;
        for (NodeId x : got->nodes) nodes.push_back(static_cast<int>(index(x)));
        return nodes == want->nodes && got->bottleneck == want->bottleneck;
      };
      path_total += 2;
      path_ok += same(be, be_want) + same(wb, wb_want);
    }
  }

  int hop_ok = 0;
  int hop_total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 10;
    NodeState s(id(0));
    oracle::Adjacency adj(n);
    auto link = [&](int a, int b) {
      if (b != 0 && std::find(adj[a].begin(), adj[a].end(), b) == adj[a].end()) adj[a].push_back(b);
    };
    for (int v = 1; v < n; ++v) {
      if (g() % 3 == 0) {
        s.neighbors[id(v)] = NeighborTuple{id(v), true};
        link(0, v);
      }
    }
    for (int k = 0; k < 25; ++k) {
      const int a = 1 + static_cast<int>(g() % (n - 1));
      const int b = static_cast<int>(g() % n);
      if (a == b) continue;
      s.topology.push_back({id(b), id(a), 1});
      link(a, b);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    const auto table = compute_routing_table(s, PathPolicy::ShortestHop);
    const auto dist = oracle::bfs_distances(adj, 0);
    for (int d = 1; d < n; ++d) {
      ++hop_total;
      auto it = table.find(id(d));
      if (dist[d] < 0) {
        hop_ok += it == table.end();
      } else {
        hop_ok += it != table.end() && static_cast<int>(it->second.hops) == dist[d];
      }
    }
  }
  gate.report(3, path_ok == path_total && hop_ok == hop_total, "Oracle equivalence",
              fmt("%d/%d path scores match enumeration, %d/%d hop counts match BFS", path_ok,
                  path_total, hop_ok, hop_total));
}

void estimator_exactness(Gate& gate, AuditTally& audit) {
  ScenarioConfig s;
  s.id = "constant-drain";
  s.node_count = 12;
  s.width = 500;
  s.height = 500;
  s.radio.base_loss = 0.0;
  s.energy.tx_per_packet = Energy{};
  s.energy.rx_per_packet = Energy{};
  s.energy.idle_per_second = Energy::joules(0.05);
  s.horizon = seconds(200);
  s.sample_interval = seconds(1);

  s.protocol.estimation_mode = EstimationMode::Prediction;
  auto pred = run(s, 31, SimOptions{true, {}});
  audit.add(pred);
  double worst = 0.0;
  std::uint64_t adjusted = 0;
  std::map<std::pair<NodeId, NodeId>, bool> seen_rate;
  bool regressed = false;
  for (const auto& r : pred.inaccuracy_rows) {
    auto& has = seen_rate[{r.observer, r.subject}];
    if (r.adjusted) {
      has = true;
      ++adjusted;
      worst = std::max(worst, r.error);
    } else if (has) {
      regressed = true;
    }
  }

  s.protocol.estimation_mode = EstimationMode::Ideal;
  auto ideal = run(s, 31, SimOptions{true, {}});
  audit.add(ideal);
  double ideal_worst = 0.0;
  for (const auto& r : ideal.inaccuracy_rows) ideal_worst = std::max(ideal_worst, r.error);

  const bool ok = adjusted > 0 && worst <= 1e-9 && !regressed && ideal_worst == 0.0 &&
                  ideal.mean_inaccuracy == 0.0 && !ideal.inaccuracy_rows.empty();
  gate.report(4, ok, "Estimator exactness",
              fmt("Prediction max error %.3g over %llu rate-backed samples%s; Ideal max error %.3g "
                  "over %zu samples",
                  worst, static_cast<unsigned long long>(adjusted),
                  regressed ? " (a pair lost its rate)" : "", ideal_worst,
                  ideal.inaccuracy_rows.size()));
}

std::vector<CellSummary> run_spec(const ExperimentSpec& spec, AuditTally& audit,
                                  std::vector<CellResult>& results) {
  results = run_batch(spec, jobs());
  audit.add(results);
  return summarize(spec, results);
}

const CellSummary& cell(const std::vector<CellSummary>& cells, std::size_t arm, std::size_t sweep) {
  for (const auto& c : cells) {
    if (c.arm == arm && c.sweep == sweep) return c;
  }
  throw std::logic_error("missing cell");
}

void figure2(Gate& gate, AuditTally& audit) {
  const auto t0 = Clock::now();
  const auto spec = fig2_preset();
  std::vector<CellResult> results;
  const auto cells = run_spec(spec, audit, results);
  const double secs = elapsed(t0);

  bool delivery = true;
  bool falling = true;
  std::string detail = "delivered ideal/realistic:";
  std::string inacc = " | realistic inaccuracy:";
  double prev = INFINITY;
  for (std::size_t v = 0; v < spec.sweep.values.size(); ++v) {
    const auto& ideal = cell(cells, 0, v);
    const auto& real = cell(cells, 1, v);
    delivery = delivery && ideal.delivered.mean >= real.delivered.mean;
    falling = falling && real.inaccuracy.mean < prev;
    prev = real.inaccuracy.mean;
    detail += fmt(" %gs=%.1f/%.1f", spec.sweep.values[v], ideal.delivered.mean, real.delivered.mean);
    inacc += fmt(" %gs=%.4f", spec.sweep.values[v], real.inaccuracy.mean);
  }
  detail += inacc;
  detail += fmt(" | delivery %s, inaccuracy trend %s, %.0f s", delivery ? "ok" : "violated",
                falling ? "decreasing" : "not decreasing", secs);
  gate.report(5, delivery && falling && secs < 600.0, "Ideal vs Realistic direction", detail);
}

void figure3(Gate& gate, AuditTally& audit) {
  const auto spec = fig3_preset();
  std::vector<CellResult> results;
  const auto cells = run_spec(spec, audit, results);
  const auto& olsr = cell(cells, 0, 0);
  const auto& eolsr = cell(cells, 1, 0);

  int wins = 0;
  int losses = 0;
  int deaths = 0;
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    const auto& a = results[i].metrics;                      // olsr
    const auto& b = results[spec.seeds.size() + i].metrics;  // eolsr
    deaths += a.first_node_death.has_value() + b.first_node_death.has_value();
    const double la = lifetime_seconds(a);
    const double lb = lifetime_seconds(b);
    wins += lb > la;
    losses += lb < la;
  }
  const double p = sign_test_p(wins, losses);
  const bool ok = eolsr.lifetime.mean > olsr.lifetime.mean && p < 0.05;
  gate.report(6, ok, "EOLSR outlives OLSR",
              fmt("mean first death OLSR %.1f s, EOLSR %.1f s; EOLSR later in %d, earlier in %d "
                  "seeds; sign test p=%.4f; %d/%zu runs saw a death",
                  olsr.lifetime.mean, eolsr.lifetime.mean, wins, losses, p, deaths,
                  2 * spec.seeds.size()));
}

void estimator_ordering(Gate& gate, AuditTally& audit) {
  auto spec = inaccuracy_preset();
  // High-traffic cell only.
  spec.sweep.values = {spec.sweep.values.back()};
  std::vector<CellResult> results;
  const auto cells = run_spec(spec, audit, results);
  auto arm_index = [&](std::string_view label) {
    for (std::size_t i = 0; i < spec.arms.size(); ++i) {
      if (spec.arms[i].label == label) return i;
    }
    throw std::logic_error("missing arm");
  };
  const auto real = arm_index("realistic");
  const auto pred = arm_index("prediction");
  const auto smart = arm_index("smart_prediction");
  const double r = cell(cells, real, 0).inaccuracy.mean;
  const double p = cell(cells, pred, 0).inaccuracy.mean;
  const double s = cell(cells, smart, 0).inaccuracy.mean;

  const std::size_t n = spec.seeds.size();
  int wins = 0;
  int losses = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = results[smart * n + i].metrics.mean_inaccuracy;
    const double b = results[real * n + i].metrics.mean_inaccuracy;
    wins += a < b;
    losses += a > b;
  }
  const double pv = sign_test_p(wins, losses);
  const bool ok = s <= p && p <= r && pv < 0.05;
  gate.report(7, ok, "Estimator ordering",
              fmt("at %gs: smart %.5f <= prediction %.5f <= realistic %.5f; smart better in %d, "
                  "worse in %d seeds, sign test p=%.2g",
                  spec.sweep.values[0], s, p, r, wins, losses, pv));
}

void determinism(Gate& gate, AuditTally& audit) {
  int identical = 0;
  std::string names;
  for (const char* name : {"line.json", "desk_scale.json", "mobile.json"}) {
    const auto s = load(name);
    auto render = [&] {
      auto m = run(s, 42, SimOptions{true, {}});
      audit.add(m);
      std::string all;
      for (const auto& f : run_outputs(s, m)) {
        if (f.name.ends_with(".csv")) all += f.name + "\n" + f.content;
      }
      return all;
    };
    const auto a = render();
    const auto b = render();
    identical += a == b && !a.empty();
    names += fmt(" %s(%zu bytes)", name, a.size());
  }
  gate.report(8, identical == 3, "Determinism",
              fmt("%d/3 scenarios byte-identical across reruns:%s", identical, names.c_str()));
}

}  // namespace

int main() {
  Gate gate;
  AuditTally audit;
  try {
    mpr_coverage(gate);
    flooding_economy(gate, audit);
    oracle_equivalence(gate);
    estimator_exactness(gate, audit);
    figure2(gate, audit);
    figure3(gate, audit);
    estimator_ordering(gate, audit);
    determinism(gate, audit);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  gate.report(9, audit.unbalanced == 0 && audit.nodes > 0, "Energy conservation",
              fmt("%llu unbalanced audits over %llu node-runs in %llu simulations",
                  static_cast<unsigned long long>(audit.unbalanced),
                  static_cast<unsigned long long>(audit.nodes),
                  static_cast<unsigned long long>(audit.runs)));
  std::printf("%d criteria failed\n", gate.failed);
  return gate.failed == 0 ? 0 : 1;
}
