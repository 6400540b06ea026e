#include "olsrsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace olsrsim {

using nlohmann::json;

namespace {

const std::set<std::string> kSweepParameters{"packet_interval", "flow_count",     "base_loss",
                                             "max_speed",       "hello_interval", "tc_interval"};

/// Shortest representation that parses back to the same double.
std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string num(std::uint64_t v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      throw ScenarioError(where + ": unknown key '" + key + "'");
    }
  }
}

Arm parse_arm(const json& j, std::size_t i) {
  const std::string where = "arms[" + std::to_string(i) + "]";
  check_keys(j, where, {"label", "estimation_mode", "variant", "mpr_policy", "path_policy"});
  Arm arm;
  arm.label = j.value("label", "");
  if (arm.label.empty()) throw ScenarioError(where + ": label is required");
  if (j.contains("estimation_mode")) {
    auto m = parse_estimation_mode(j.at("estimation_mode").get<std::string>());
    if (!m) throw ScenarioError(where + ": unknown estimation_mode");
    arm.mode = *m;
  }
  if (j.contains("variant")) {
    auto v = parse_variant(j.at("variant").get<std::string>());
    if (!v) throw ScenarioError(where + ": unknown variant");
    arm.variant = *v;
  }
  if (j.contains("mpr_policy")) {
    auto p = parse_mpr_policy(j.at("mpr_policy").get<std::string>());
    if (!p) throw ScenarioError(where + ": unknown mpr_policy");
    arm.variant.mpr_policy = *p;
  }
  if (j.contains("path_policy")) {
    auto p = parse_path_policy(j.at("path_policy").get<std::string>());
    if (!p) throw ScenarioError(where + ": unknown path_policy");
    arm.variant.path_policy = *p;
  }
  return arm;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_array()) {
    for (const auto& s : j) seeds.push_back(s.get<std::uint64_t>());
  } else if (j.is_object()) {
    check_keys(j, "seeds", {"first", "count"});
    const auto first = j.value("first", std::uint64_t{1});
    const auto count = j.at("count").get<std::uint64_t>();
    for (std::uint64_t k = 0; k < count; ++k) seeds.push_back(first + k);
  } else {
    throw ScenarioError("seeds: expected an array or {first, count}");
  }
  return seeds;
}

json arm_json(const Arm& a) {
  return {{"label", a.label},
          {"estimation_mode", std::string(to_string(a.mode))},
          {"mpr_policy", std::string(to_string(a.variant.mpr_policy))},
          {"path_policy", std::string(to_string(a.variant.path_policy))}};
}

/// The desk-scale scenario all presets start from.
ScenarioConfig desk_scale() {
  ScenarioConfig s;
  s.id = "desk-scale";
  s.node_count = 30;
  s.width = s.height = 1000.0;
  s.radio.range = 250.0;
  s.random_traffic.count = 5;
  s.random_traffic.packet_interval = seconds(1.0);
  s.horizon = seconds(300.0);
  s.sample_interval = seconds(5.0);
  return s;
}

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> seeds(20);
  std::iota(seeds.begin(), seeds.end(), 1);
  return seeds;
}

std::string arm_columns(const Arm& a) {
  return a.label + "," + std::string(to_string(a.mode)) + "," +
         std::string(to_string(a.variant.mpr_policy)) + "," +
         std::string(to_string(a.variant.path_policy));
}

const char* kRawHeader =
    "arm,estimation_mode,mpr_policy,path_policy,sweep_parameter,sweep_value,seed,packets_sent,"
    "packets_delivered,mean_inaccuracy,inaccuracy_samples,adjustment_fraction,first_node_death,"
    "node_died,ended_at\n";

const char* kSummaryHeader =
    "arm,estimation_mode,mpr_policy,path_policy,sweep_parameter,sweep_value,runs,"
    "mean_packets_sent,sd_packets_sent,mean_packets_delivered,sd_packets_delivered,"
    "mean_inaccuracy,sd_inaccuracy,mean_first_node_death,sd_first_node_death,"
    "mean_adjustment_fraction,sd_adjustment_fraction\n";

std::string raw_csv(const ExperimentSpec& spec, std::span<const CellResult> results) {
  std::string out = kRawHeader;
  for (const auto& r : results) {
    const auto& m = r.metrics;
    out += arm_columns(spec.arms[r.arm]) + "," + spec.sweep.parameter + "," +
           num(spec.sweep.values[r.sweep]) + "," + num(r.seed) + "," + num(m.packets_sent) + "," +
           num(m.packets_delivered) + "," + num(m.mean_inaccuracy) + "," +
           num(m.inaccuracy_samples) + "," + num(m.adjustment_fraction()) + "," +
           num(lifetime_seconds(m)) + "," + (m.first_node_death ? "1" : "0") + "," +
           num(to_seconds(m.ended_at)) + "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentSpec& spec, std::span<const CellResult> results) {
  std::string out = kSummaryHeader;
  auto ms = [](const Moments& m) { return num(m.mean) + "," + num(m.sd); };
  for (const auto& c : summarize(spec, results)) {
    out += arm_columns(spec.arms[c.arm]) + "," + spec.sweep.parameter + "," +
           num(spec.sweep.values[c.sweep]) + "," + num(static_cast<std::uint64_t>(c.runs)) + "," +
           ms(c.sent) + "," + ms(c.delivered) + "," + ms(c.inaccuracy) + "," + ms(c.lifetime) +
           "," + ms(c.adjustment_fraction) + "\n";
  }
  return out;
}

}  // namespace

// --- Spec handling ---------------------------------------------------------

std::vector<std::string> validate_experiment(const ExperimentSpec& spec) {
  std::vector<std::string> errors;
  if (spec.name.empty()) errors.emplace_back("name must be non-empty");
  if (!kSweepParameters.contains(spec.sweep.parameter)) {
    errors.push_back("sweep.parameter '" + spec.sweep.parameter + "' is not sweepable");
  }
  if (spec.sweep.values.empty()) errors.emplace_back("sweep.values must be non-empty");
  if (spec.seeds.empty()) errors.emplace_back("seeds must be non-empty");
  if (spec.arms.empty()) errors.emplace_back("arms must be non-empty");
  std::set<std::string> labels;
  for (const auto& a : spec.arms) {
    if (!labels.insert(a.label).second) errors.push_back("duplicate arm label '" + a.label + "'");
  }
  if (!errors.empty()) return errors;

  // Every cell must be runnable before anything starts.
  std::set<std::string> seen;
  for (const auto& arm : spec.arms) {
    for (double v : spec.sweep.values) {
      for (const auto& e : validate_scenario(cell_scenario(spec, arm, v))) {
        const std::string msg =
            arm.label + " @ " + spec.sweep.parameter + "=" + num(v) + ": " + e;
        if (seen.insert(msg).second) errors.push_back(msg);
      }
    }
  }
  return errors;
}

ExperimentSpec parse_experiment_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("experiment spec is not valid JSON: ") + e.what());
  }
  check_keys(j, "experiment", {"name", "base", "sweep", "arms", "seeds", "outputs"});
  try {
    ExperimentSpec spec;
    spec.name = j.value("name", "");
    spec.base = j.contains("base") ? parse_scenario_json(j.at("base").dump()) : desk_scale();
    if (!j.contains("sweep")) throw ScenarioError("sweep is required");
    const auto& sw = j.at("sweep");
    check_keys(sw, "sweep", {"parameter", "values"});
    spec.sweep.parameter = sw.at("parameter").get<std::string>();
    spec.sweep.values = sw.at("values").get<std::vector<double>>();
    if (!j.contains("arms") || !j.at("arms").is_array()) throw ScenarioError("arms must be an array");
    for (std::size_t i = 0; i < j.at("arms").size(); ++i) {
      spec.arms.push_back(parse_arm(j.at("arms")[i], i));
    }
    spec.seeds = j.contains("seeds") ? parse_seeds(j.at("seeds")) : default_seeds();
    spec.outputs = j.value("outputs", "out");
    return spec;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("experiment spec: ") + e.what());
  }
}

ExperimentSpec load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("experiment spec not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_json(buf.str());
}

std::string experiment_to_json(const ExperimentSpec& spec, int indent) {
  json arms = json::array();
  for (const auto& a : spec.arms) arms.push_back(arm_json(a));
  json j = {{"name", spec.name},
            {"base", json::parse(scenario_to_json(spec.base))},
            {"sweep", {{"parameter", spec.sweep.parameter}, {"values", spec.sweep.values}}},
            {"arms", arms},
            {"seeds", spec.seeds},
            {"outputs", spec.outputs}};
  return j.dump(indent);
}

ExperimentSpec fig2_preset() {
  ExperimentSpec spec;
  spec.name = "fig2";
  spec.base = desk_scale();
  spec.sweep = {"packet_interval", {2.0, 1.0, 0.5, 0.25, 0.1}};
  spec.arms = {{"ideal", EstimationMode::Ideal, VariantConfig::eolsr()},
               {"realistic", EstimationMode::Realistic, VariantConfig::eolsr()}};
  spec.seeds = default_seeds();
  return spec;
}

ExperimentSpec fig3_preset() {
  ExperimentSpec spec;
  spec.name = "fig3";
  spec.base = desk_scale();
  spec.sweep = {"packet_interval", {0.1}};
  spec.arms = {{"olsr", EstimationMode::Realistic, VariantConfig::olsr()},
               {"eolsr", EstimationMode::Realistic, VariantConfig::eolsr()}};
  spec.seeds = default_seeds();
  return spec;
}

ExperimentSpec inaccuracy_preset() {
  ExperimentSpec spec;
  spec.name = "inaccuracy";
  spec.base = desk_scale();
  spec.sweep = {"packet_interval", {2.0, 0.5, 0.1}};
  spec.arms = {{"ideal", EstimationMode::Ideal, VariantConfig::eolsr()},
               {"realistic", EstimationMode::Realistic, VariantConfig::eolsr()},
               {"prediction", EstimationMode::Prediction, VariantConfig::eolsr()},
               {"smart_prediction", EstimationMode::SmartPrediction, VariantConfig::eolsr()}};
  spec.seeds = default_seeds();
  return spec;
}

ScenarioConfig apply_sweep(ScenarioConfig s, const std::string& parameter, double value) {
  if (parameter == "packet_interval") {
    s.random_traffic.packet_interval = seconds(value);
    for (auto& f : s.flows) f.packet_interval = seconds(value);
  } else if (parameter == "flow_count") {
    s.random_traffic.count = static_cast<std::uint32_t>(std::max(0.0, std::round(value)));
  } else if (parameter == "base_loss") {
    s.radio.base_loss = value;
  } else if (parameter == "max_speed") {
    s.mobility.max_speed = value;
  } else if (parameter == "hello_interval") {
    s.protocol.hello_interval = seconds(value);
  } else if (parameter == "tc_interval") {
    s.protocol.tc_interval = seconds(value);
  } else {
    throw ScenarioError("sweep.parameter '" + parameter + "' is not sweepable");
  }
  return s;
}

ScenarioConfig cell_scenario(const ExperimentSpec& spec, const Arm& arm, double sweep_value) {
  ScenarioConfig s = apply_sweep(spec.base, spec.sweep.parameter, sweep_value);
  s.protocol.estimation_mode = arm.mode;
  s.protocol.mpr_policy = arm.variant.mpr_policy;
  s.protocol.path_policy = arm.variant.path_policy;
  s.id = spec.name + "/" + arm.label + "/" + spec.sweep.parameter + "=" + num(sweep_value);
  return s;
}

// --- Execution -------------------------------------------------------------

std::vector<CellResult> run_batch(const ExperimentSpec& spec, unsigned jobs, SimOptions options) {
  if (auto errors = validate_experiment(spec); !errors.empty()) {
    throw ScenarioError(join(errors, "; "));
  }
  std::vector<CellResult> results;
  for (std::size_t a = 0; a < spec.arms.size(); ++a) {
    for (std::size_t v = 0; v < spec.sweep.values.size(); ++v) {
      for (auto seed : spec.seeds) results.push_back({a, v, seed, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= results.size()) return;
      auto& cell = results[k];
      try {
        cell.metrics = run(cell_scenario(spec, spec.arms[cell.arm], spec.sweep.values[cell.sweep]),
                           cell.seed, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(results.size());
        return;
      }
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(results.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

void check_invariants(const ExperimentSpec& spec, std::span<const CellResult> results) {
  for (const auto& r : results) {
    const auto& m = r.metrics;
    for (const auto& a : m.audit) {
      if (!a.balanced) {
        throw InvariantError(m.scenario_id + " seed " + num(r.seed) + ": energy audit of node " +
                             std::to_string(index(a.node)) + " does not balance");
      }
    }
    if (spec.arms[r.arm].mode == EstimationMode::Ideal && m.mean_inaccuracy != 0.0) {
      throw InvariantError(m.scenario_id + " seed " + num(r.seed) +
                           ": Ideal mode reported non-zero inaccuracy");
    }
  }
}

// --- Statistics ------------------------------------------------------------

Moments moments(std::span<const double> xs) {
  Moments m;
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

double sign_test_p(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  // Sum C(n, k) / 2^n for k >= wins, in log space to stay finite for large n.
  double p = 0.0;
  for (int k = wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  n * std::log(2.0));
  }
  return std::min(1.0, p);
}

double lifetime_seconds(const MetricsRecord& m) {
  return to_seconds(m.first_node_death.value_or(m.ended_at));
}

std::vector<CellSummary> summarize(const ExperimentSpec&, std::span<const CellResult> results) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const MetricsRecord*>> cells;
  for (const auto& r : results) cells[{r.arm, r.sweep}].push_back(&r.metrics);
  std::vector<CellSummary> out;
  for (const auto& [key, runs] : cells) {
    auto collect = [&](auto f) {
      std::vector<double> xs;
      for (const auto* m : runs) xs.push_back(f(*m));
      return moments(xs);
    };
    CellSummary c;
    c.arm = key.first;
    c.sweep = key.second;
    c.runs = runs.size();
    c.sent = collect([](const MetricsRecord& m) { return static_cast<double>(m.packets_sent); });
    c.delivered =
        collect([](const MetricsRecord& m) { return static_cast<double>(m.packets_delivered); });
    c.inaccuracy = collect([](const MetricsRecord& m) { return m.mean_inaccuracy; });
    c.lifetime = collect([](const MetricsRecord& m) { return lifetime_seconds(m); });
    c.adjustment_fraction = collect([](const MetricsRecord& m) { return m.adjustment_fraction(); });
    out.push_back(c);
  }
  return out;
}

// --- Output ----------------------------------------------------------------

std::vector<OutputFile> run_outputs(const ScenarioConfig& scenario, const MetricsRecord& m) {
  std::string metrics = "time,node,residual_energy,alive,mean_perceived_error\n";
  for (const auto& s : m.samples) {
    metrics += num(to_seconds(s.time)) + "," + std::to_string(index(s.node)) + "," +
               num(s.actual.as_joules()) + "," + (s.alive ? "1" : "0") + "," +
               num(s.mean_perceived_error) + "\n";
  }
  std::string rows = "time,observer,subject,perceived,actual,error\n";
  for (const auto& r : m.inaccuracy_rows) {
    rows += num(to_seconds(r.at)) + "," + std::to_string(index(r.observer)) + "," +
            std::to_string(index(r.subject)) + "," + num(r.perceived) + "," + num(r.actual) + "," +
            num(r.error) + "\n";
  }

  const auto& c = m.counters;
  json counters = {{"hello_sent", c.hello_sent},
                   {"tc_sent", c.tc_sent},
                   {"tc_forwarded", c.tc_forwarded},
                   {"data_forwarded", c.data_forwarded},
                   {"frames_serviced", c.frames_serviced},
                   {"queue_drops", c.queue_drops},
                   {"loss_drops", c.loss_drops},
                   {"link_breaks", c.link_breaks},
                   {"routing_failures", c.routing_failures},
                   {"ttl_drops", c.ttl_drops},
                   {"dead_sender_discards", c.dead_sender_discards},
                   {"malformed_dropped", c.malformed_dropped},
                   {"perceptions", c.perceptions},
                   {"adjusted_perceptions", c.adjusted_perceptions}};
  bool balanced = std::all_of(m.audit.begin(), m.audit.end(), [](const auto& a) { return a.balanced; });
  json summary = {{"scenario_id", scenario.id},
                  {"seed", m.seed},
                  {"packets_sent", m.packets_sent},
                  {"packets_delivered", m.packets_delivered},
                  {"mean_inaccuracy", m.mean_inaccuracy},
                  {"inaccuracy_samples", m.inaccuracy_samples},
                  {"adjustment_fraction", m.adjustment_fraction()},
                  {"first_node_death", m.first_node_death ? json(to_seconds(*m.first_node_death))
                                                          : json(nullptr)},
                  {"ended_at", to_seconds(m.ended_at)},
                  {"energy_audit_balanced", balanced},
                  {"counters", counters}};
  return {{"metrics.csv", metrics}, {"inaccuracy.csv", rows}, {"summary.json", summary.dump(2) + "\n"}};
}

std::vector<OutputFile> fig2_outputs(const ExperimentSpec& spec, std::span<const CellResult> results) {
  return {{"fig2_raw.csv", raw_csv(spec, results)}, {"fig2_summary.csv", summary_csv(spec, results)}};
}

std::vector<OutputFile> fig3_outputs(const ExperimentSpec& spec, std::span<const CellResult> results) {
  std::string series = "arm,seed,sweep_value,time,min_energy,mean_energy,alive_nodes\n";
  std::string lifetime = "arm,seed,sweep_value,first_node_death,node_died\n";
  for (const auto& r : results) {
    const std::string prefix = spec.arms[r.arm].label + "," + num(r.seed) + "," +
                               num(spec.sweep.values[r.sweep]) + ",";
    // Samples are grouped by time with one row per node.
    const auto& samples = r.metrics.samples;
    for (std::size_t i = 0; i < samples.size();) {
      const SimTime t = samples[i].time;
      double lo = INFINITY;
      double sum = 0.0;
      std::size_t n = 0;
      std::size_t alive = 0;
      for (; i < samples.size() && samples[i].time == t; ++i) {
        const double e = samples[i].actual.as_joules();
        lo = std::min(lo, e);
        sum += e;
        ++n;
        alive += samples[i].alive ? 1 : 0;
      }
      series += prefix + num(to_seconds(t)) + "," + num(lo) + "," + num(sum / static_cast<double>(n)) +
                "," + std::to_string(alive) + "\n";
    }
    lifetime += prefix + num(lifetime_seconds(r.metrics)) + "," +
                (r.metrics.first_node_death ? "1" : "0") + "\n";
  }
  return {{"fig3_series.csv", series},
          {"fig3_lifetime.csv", lifetime},
          {"fig3_raw.csv", raw_csv(spec, results)},
          {"fig3_summary.csv", summary_csv(spec, results)}};
}

std::vector<OutputFile> inaccuracy_outputs(const ExperimentSpec& spec,
                                           std::span<const CellResult> results) {
  return {{"inaccuracy_raw.csv", raw_csv(spec, results)},
          {"inaccuracy_summary.csv", summary_csv(spec, results)}};
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OutputFile manifest(const ExperimentSpec& spec, std::string_view command,
                    std::span<const OutputFile> files) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(experiment_to_json(spec, -1))));
  json arms = json::array();
  for (const auto& a : spec.arms) arms.push_back(arm_json(a));
  json listed = json::array();
  for (const auto& f : files) listed.push_back(f.name);
  json j = {{"command", std::string(command)},
            {"experiment", spec.name},
            {"spec_hash", std::string("fnv1a64:") + hash},
            {"seeds", spec.seeds},
            {"sweep", {{"parameter", spec.sweep.parameter}, {"values", spec.sweep.values}}},
            {"arms", arms},
            {"files", listed},
            {"versions", {{"olsrsim", std::string(kVersion)}}}};
  return {"manifest.json", j.dump(2) + "\n"};
}

void write_outputs(const std::filesystem::path& dir, std::span<const OutputFile> files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<fs::path> staged;
  try {
    for (const auto& f : files) {
      fs::path tmp = dir / (f.name + ".partial");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << f.content;
      out.close();
      if (!out) throw IoError("cannot write " + tmp.string());
      staged.push_back(tmp);
    }
  } catch (...) {
    for (const auto& p : staged) fs::remove(p);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], dir / files[i].name);
}

}  // namespace olsrsim
