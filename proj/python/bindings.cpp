#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "olsrsim/experiments.hpp"
#include "olsrsim/graph.hpp"
#include "olsrsim/mpr.hpp"
#include "olsrsim/scenario.hpp"
#include "olsrsim/sim.hpp"

namespace py = pybind11;
using namespace olsrsim;

namespace {

NodeId node(std::uint32_t i) { return NodeId{i}; }

py::dict files_dict(const std::vector<OutputFile>& files) {
  py::dict d;
  for (const auto& f : files) d[py::str(f.name)] = f.content;
  return d;
}

ScenarioConfig checked(const std::string& text) {
  auto s = parse_scenario_json(text);
  if (auto errors = validate_scenario(s); !errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw ScenarioError(msg);
  }
  return s;
}

py::dict run_scenario(const std::string& text, std::uint64_t seed, bool inaccuracy_rows) {
  const auto s = checked(text);
  MetricsRecord m;
  {
    py::gil_scoped_release release;
    m = run(s, seed, SimOptions{inaccuracy_rows, {}});
  }
  const auto& c = m.counters;
  py::dict counters;
  counters["hello_sent"] = c.hello_sent;
  counters["tc_sent"] = c.tc_sent;
  counters["tc_forwarded"] = c.tc_forwarded;
  counters["data_forwarded"] = c.data_forwarded;
  counters["frames_serviced"] = c.frames_serviced;
  counters["queue_drops"] = c.queue_drops;
  counters["loss_drops"] = c.loss_drops;
  counters["link_breaks"] = c.link_breaks;
  counters["routing_failures"] = c.routing_failures;
  counters["ttl_drops"] = c.ttl_drops;
  counters["malformed_dropped"] = c.malformed_dropped;

  py::dict out;
  out["scenario_id"] = s.id;
  out["seed"] = seed;
  out["packets_sent"] = m.packets_sent;
  out["packets_delivered"] = m.packets_delivered;
  out["mean_inaccuracy"] = m.mean_inaccuracy;
  out["inaccuracy_samples"] = m.inaccuracy_samples;
  out["adjustment_fraction"] = m.adjustment_fraction();
  out["first_node_death"] =
      m.first_node_death ? py::object(py::float_(to_seconds(*m.first_node_death))) : py::none();
  out["ended_at"] = to_seconds(m.ended_at);
  out["energy_audit_balanced"] =
      std::all_of(m.audit.begin(), m.audit.end(), [](const EnergyAudit& a) { return a.balanced; });
  out["counters"] = counters;
  out["files"] = files_dict(run_outputs(s, m));
  return out;
}

ExperimentSpec preset(const std::string& name) {
  if (name == "fig2") return fig2_preset();
  if (name == "fig3") return fig3_preset();
  if (name == "inaccuracy") return inaccuracy_preset();
  throw py::value_error("unknown experiment '" + name + "'");
}

py::dict run_experiment(const std::string& name, std::optional<std::string> spec_json,
                        std::optional<std::vector<std::uint64_t>> seeds, unsigned jobs) {
  ExperimentSpec spec = spec_json ? parse_experiment_json(*spec_json) : preset(name);
  if (seeds) spec.seeds = *seeds;
  if (auto errors = validate_experiment(spec); !errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw ScenarioError(msg);
  }
  std::vector<OutputFile> files;
  {
    py::gil_scoped_release release;
    const auto results = run_batch(spec, std::max(1u, jobs));
    check_invariants(spec, results);
    if (name == "fig2") {
      files = fig2_outputs(spec, results);
    } else if (name == "fig3") {
      files = fig3_outputs(spec, results);
    } else {
      files = inaccuracy_outputs(spec, results);
    }
    files.push_back(manifest(spec, name, files));
  }
  return files_dict(files);
}

std::vector<std::uint32_t> select_mprs(
    const std::vector<std::tuple<std::uint32_t, bool, std::uint32_t>>& neighbors,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& two_hop, int coverage,
    std::optional<std::map<std::uint32_t, double>> energy) {
  std::map<NodeId, NeighborTuple> nb;
  for (const auto& [id, symmetric, degree] : neighbors) {
    NeighborTuple t;
    t.neighbor = node(id);
    t.symmetric = symmetric;
    t.degree = degree;
    nb[t.neighbor] = t;
  }
  std::vector<TwoHopTuple> th;
  for (const auto& [via, target] : two_hop) th.push_back({node(via), node(target)});
  std::set<NodeId> mprs;
  if (energy) {
    mprs = select_mprs_energy(nb, th, coverage, [&](NodeId n) {
      auto it = energy->find(index(n));
      return it == energy->end() ? 0.0 : it->second;
    });
  } else {
    mprs = select_mprs_classic(nb, th, coverage);
  }
  std::vector<std::uint32_t> out;
  for (NodeId n : mprs) out.push_back(index(n));
  return out;
}

std::optional<std::pair<std::vector<std::uint32_t>, double>> best_path(
    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges, std::uint32_t src,
    std::uint32_t dst, const std::string& policy, const std::vector<double>& energy) {
  AdvertisedGraph g(std::max(src, dst) + 1);
  for (const auto& [a, b, bw] : edges) g.add_edge(node(a), node(b), bw);
  const auto p = parse_path_policy(policy);
  if (!p) throw py::value_error("unknown path policy '" + policy + "'");
  std::optional<ScoredPath> path;
  switch (*p) {
    case PathPolicy::ShortestHop: {
      auto all = shortest_hop_paths(g, node(src));
      if (dst < all.size() && dst != src) path = all[dst];
      break;
    }
    case PathPolicy::BottleneckEnergy:
      path = best_path_bottleneck(g, node(src), node(dst), energy);
      break;
    case PathPolicy::WidestBandwidth:
      path = best_path_widest_bandwidth(g, node(src), node(dst));
      break;
  }
  if (!path) return std::nullopt;
  std::vector<std::uint32_t> nodes;
  for (NodeId n : path->nodes) nodes.push_back(index(n));
  return std::make_pair(nodes, path->bottleneck);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "OLSR / EOLSR energy-aware routing simulator";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  m.def(
      "validate_scenario",
      [](const std::string& text) { return validate_scenario(parse_scenario_json(text)); },
      py::arg("scenario_json"), "Every violated constraint; empty when runnable.");
  m.def(
      "load_scenario",
      [](const std::string& path) { return scenario_to_json(load_scenario_file(path)); },
      py::arg("path"), "Scenario file as canonical JSON with every field filled in.");
  m.def("run_scenario", &run_scenario, py::arg("scenario_json"), py::arg("seed") = 1,
        py::arg("inaccuracy_rows") = false,
        "Run one scenario. Returns headline metrics plus the CSV/JSON outputs under 'files'.");
  m.def(
      "preset", [](const std::string& name) { return experiment_to_json(preset(name)); },
      py::arg("name"), "Built-in experiment spec (fig2, fig3, inaccuracy) as JSON.");
  m.def("run_experiment", &run_experiment, py::arg("name"), py::arg("spec_json") = py::none(),
        py::arg("seeds") = py::none(), py::arg("jobs") = 1,
        "Run a batch experiment and return {file name: content}, manifest included.");
  m.def("select_mprs", &select_mprs, py::arg("neighbors"), py::arg("two_hop"),
        py::arg("coverage") = 1, py::arg("energy") = py::none(),
        "neighbors: (id, symmetric, degree); two_hop: (via, target). Energy-aware when "
        "`energy` is given.");
  m.def("best_path", &best_path, py::arg("edges"), py::arg("src"), py::arg("dst"),
        py::arg("policy") = "shortest_hop", py::arg("energy") = std::vector<double>{},
        "edges: (from, to, bandwidth). Returns (nodes, bottleneck) or None.");
  m.def("sign_test_p", &sign_test_p, py::arg("wins"), py::arg("losses"));
}
