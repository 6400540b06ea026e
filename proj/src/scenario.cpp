#include "olsrsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace olsrsim {

using nlohmann::json;

SimTime QueueConfig::service_time() const {
  auto ms = static_cast<std::int64_t>(std::llround(1000.0 / service_rate));
  return SimTime{std::max<std::int64_t>(1, ms)};
}

std::vector<std::string> validate_scenario(const ScenarioConfig& s) {
  std::vector<std::string> errors = validate_params(s.protocol);
  auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };

  if (s.node_count < 1) fail("nodes must be >= 1");
  if (!(s.width > 0.0) || !(s.height > 0.0)) fail("area dimensions must be > 0");
  if (!s.positions.empty() && s.positions.size() != s.node_count) {
    fail("positions must list exactly one entry per node");
  }
  if (!(s.radio.range > 0.0)) fail("radio.range must be > 0");
  if (s.radio.propagation_delay < SimTime::zero()) fail("radio.propagation_delay must be >= 0");
  if (!(s.radio.base_loss >= 0.0 && s.radio.base_loss <= 1.0)) {
    fail("radio.base_loss must be in [0,1]");
  }
  if (s.radio.nominal_bandwidth < 0.0 || s.radio.default_link_bandwidth < 0.0) {
    fail("bandwidths must be >= 0");
  }
  if (s.mobility.kind == MobilityKind::RandomWaypoint &&
      !(s.mobility.min_speed > 0.0 && s.mobility.max_speed >= s.mobility.min_speed)) {
    fail("mobility speeds must satisfy 0 < min_speed <= max_speed");
  }
  if (s.mobility.pause < SimTime::zero()) fail("mobility.pause must be >= 0");

  const auto& e = s.energy;
  if (e.initial <= Energy{}) fail("energy.initial must be > 0");
  if (e.tx_per_packet < Energy{} || e.rx_per_packet < Energy{} || e.idle_per_second < Energy{}) {
    fail("energy costs must be >= 0");
  }
  if (e.idle_per_second.as_nanojoules() % 1000 != 0) {
    fail("energy.idle_rate must be a whole number of microjoules per second");
  }
  if (!(e.low_energy_threshold >= 0.0 && e.low_energy_threshold <= 1.0)) {
    fail("energy.low_energy_threshold must be in [0,1]");
  }
  if (s.queue.capacity < 1) fail("queue.capacity must be >= 1");
  if (!(s.queue.service_rate > 0.0 && s.queue.service_rate <= 1000.0)) {
    fail("queue.service_rate must be in (0, 1000]");
  }

  auto check_flow = [&](SimTime interval, std::optional<SimTime> stop, SimTime start) {
    if (interval <= SimTime::zero()) fail("packet_interval must be > 0");
    if (start < SimTime::zero()) fail("flow start must be >= 0");
    if (stop && *stop < start) fail("flow stop must be >= start");
  };
  for (const auto& f : s.flows) {
    check_flow(f.packet_interval, f.stop, f.start);
    if (index(f.source) >= s.node_count || index(f.destination) >= s.node_count) {
      fail("flow endpoint out of range");
    }
    if (f.source == f.destination) fail("flow source and destination must differ");
  }
  if (s.random_traffic.count > 0) {
    check_flow(s.random_traffic.packet_interval, s.random_traffic.stop, s.random_traffic.start);
    if (s.node_count < 2) fail("random flows need at least 2 nodes");
  }
  if (s.data_ttl < 1) fail("traffic.ttl must be >= 1");
  if (!(s.hello_jitter >= 0.0 && s.hello_jitter < 0.5)) fail("hello_jitter must be in [0, 0.5)");
  if (s.horizon <= SimTime::zero()) fail("horizon must be > 0");
  if (s.sample_interval <= SimTime::zero()) fail("sample_interval must be > 0");
  return errors;
}

namespace {

/// Walks one JSON object, remembering which keys were consumed so that
/// leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <typename T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ScenarioError(where(key) + ": wrong type");
    }
  }

  void seconds_field(const char* key, SimTime& out) {
    double v = 0.0;
    if (!j_.contains(key)) return;
    get(key, v);
    out = seconds(v);
  }

  void optional_seconds(const char* key, std::optional<SimTime>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      seen_.insert(key);
      out.reset();
      return;
    }
    SimTime t{0};
    seconds_field(key, t);
    out = t;
  }

  void joules_field(const char* key, Energy& out) {
    if (!j_.contains(key)) return;
    double v = 0.0;
    get(key, v);
    out = Energy::joules(v);
  }

  template <typename E, typename Parse>
  void enum_field(const char* key, E& out, Parse parse) {
    if (!j_.contains(key)) return;
    std::string name;
    get(key, name);
    auto v = parse(name);
    if (!v) throw ScenarioError(where(key) + ": unknown value '" + name + "'");
    out = *v;
  }

  std::string where(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ScenarioError(path_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::optional<MobilityKind> parse_mobility(std::string_view s) {
  if (s == "static") return MobilityKind::Static;
  if (s == "random_waypoint") return MobilityKind::RandomWaypoint;
  return std::nullopt;
}

std::string_view mobility_name(MobilityKind k) {
  return k == MobilityKind::Static ? "static" : "random_waypoint";
}

FlowConfig parse_flow(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  FlowConfig f;
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  if (!r.has("source") || !r.has("destination")) {
    throw ScenarioError(path + ": source and destination are required");
  }
  r.get("source", src);
  r.get("destination", dst);
  f.source = NodeId{src};
  f.destination = NodeId{dst};
  r.seconds_field("packet_interval", f.packet_interval);
  r.get("payload", f.payload);
  r.seconds_field("start", f.start);
  r.optional_seconds("stop", f.stop);
  r.finish();
  return f;
}

json time_or_null(const std::optional<SimTime>& t) {
  return t ? json(to_seconds(*t)) : json(nullptr);
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("malformed JSON: ") + e.what());
  }

  ScenarioConfig s;
  ObjectReader r(root, "scenario");
  r.get("id", s.id);
  r.get("nodes", s.node_count);
  if (r.has("area")) {
    ObjectReader a(r.raw("area"), "scenario.area");
    a.get("width", s.width);
    a.get("height", s.height);
    a.finish();
  }
  if (r.has("positions")) {
    const json& pos = r.raw("positions");
    if (!pos.is_array()) throw ScenarioError("scenario.positions: expected an array");
    for (const auto& p : pos) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ScenarioError("scenario.positions: each entry must be [x, y]");
      }
      s.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  r.get("require_connected", s.require_connected);

  if (r.has("radio")) {
    ObjectReader x(r.raw("radio"), "scenario.radio");
    x.get("range", s.radio.range);
    x.seconds_field("propagation_delay", s.radio.propagation_delay);
    x.get("base_loss", s.radio.base_loss);
    x.get("nominal_bandwidth", s.radio.nominal_bandwidth);
    x.get("default_link_bandwidth", s.radio.default_link_bandwidth);
    x.finish();
  }
  if (r.has("mobility")) {
    ObjectReader x(r.raw("mobility"), "scenario.mobility");
    x.enum_field("kind", s.mobility.kind, parse_mobility);
    x.get("min_speed", s.mobility.min_speed);
    x.get("max_speed", s.mobility.max_speed);
    x.seconds_field("pause", s.mobility.pause);
    x.finish();
  }
  if (r.has("energy")) {
    ObjectReader x(r.raw("energy"), "scenario.energy");
    x.joules_field("initial", s.energy.initial);
    x.joules_field("tx_per_packet", s.energy.tx_per_packet);
    x.joules_field("rx_per_packet", s.energy.rx_per_packet);
    x.joules_field("idle_rate", s.energy.idle_per_second);
    x.get("low_energy_threshold", s.energy.low_energy_threshold);
    x.finish();
  }
  if (r.has("queue")) {
    ObjectReader x(r.raw("queue"), "scenario.queue");
    x.get("capacity", s.queue.capacity);
    x.get("service_rate", s.queue.service_rate);
    x.finish();
  }
  if (r.has("protocol")) {
    auto& p = s.protocol;
    ObjectReader x(r.raw("protocol"), "scenario.protocol");
    x.seconds_field("hello_interval", p.hello_interval);
    x.seconds_field("tc_interval", p.tc_interval);
    x.get("mpr_coverage", p.mpr_coverage);
    x.enum_field("tc_redundancy", p.tc_redundancy, parse_tc_redundancy);
    x.seconds_field("neighbor_hold_time", p.neighbor_hold_time);
    x.seconds_field("topology_hold_time", p.topology_hold_time);
    x.enum_field("mpr_policy", p.mpr_policy, parse_mpr_policy);
    x.enum_field("path_policy", p.path_policy, parse_path_policy);
    x.enum_field("estimation_mode", p.estimation_mode, parse_estimation_mode);
    x.get("hello_jitter", s.hello_jitter);
    x.finish();
  }
  if (r.has("traffic")) {
    ObjectReader x(r.raw("traffic"), "scenario.traffic");
    if (x.has("flows")) {
      const json& flows = x.raw("flows");
      if (!flows.is_array()) throw ScenarioError("scenario.traffic.flows: expected an array");
      for (std::size_t i = 0; i < flows.size(); ++i) {
        s.flows.push_back(parse_flow(flows[i], "scenario.traffic.flows[" + std::to_string(i) + "]"));
      }
    }
    if (x.has("random_flows")) {
      auto& rt = s.random_traffic;
      ObjectReader y(x.raw("random_flows"), "scenario.traffic.random_flows");
      y.get("count", rt.count);
      y.seconds_field("packet_interval", rt.packet_interval);
      y.get("payload", rt.payload);
      y.seconds_field("start", rt.start);
      y.optional_seconds("stop", rt.stop);
      y.finish();
    }
    x.get("piggyback_energy", s.piggyback_energy_on_data);
    int ttl = s.data_ttl;
    x.get("ttl", ttl);
    if (ttl < 0 || ttl > 255) throw ScenarioError("scenario.traffic.ttl: must be in [0,255]");
    s.data_ttl = static_cast<std::uint8_t>(ttl);
    x.finish();
  }
  r.seconds_field("horizon", s.horizon);
  r.seconds_field("sample_interval", s.sample_interval);
  r.finish();
  return s;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("scenario not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

std::string scenario_to_json(const ScenarioConfig& s, int indent) {
  json j;
  j["id"] = s.id;
  j["nodes"] = s.node_count;
  j["area"] = {{"width", s.width}, {"height", s.height}};
  if (!s.positions.empty()) {
    json pos = json::array();
    for (const auto& p : s.positions) pos.push_back({p.x, p.y});
    j["positions"] = pos;
  }
  j["require_connected"] = s.require_connected;
  j["radio"] = {{"range", s.radio.range},
                {"propagation_delay", to_seconds(s.radio.propagation_delay)},
                {"base_loss", s.radio.base_loss},
                {"nominal_bandwidth", s.radio.nominal_bandwidth},
                {"default_link_bandwidth", s.radio.default_link_bandwidth}};
  j["mobility"] = {{"kind", mobility_name(s.mobility.kind)},
                   {"min_speed", s.mobility.min_speed},
                   {"max_speed", s.mobility.max_speed},
                   {"pause", to_seconds(s.mobility.pause)}};
  j["energy"] = {{"initial", s.energy.initial.as_joules()},
                 {"tx_per_packet", s.energy.tx_per_packet.as_joules()},
                 {"rx_per_packet", s.energy.rx_per_packet.as_joules()},
                 {"idle_rate", s.energy.idle_per_second.as_joules()},
                 {"low_energy_threshold", s.energy.low_energy_threshold}};
  j["queue"] = {{"capacity", s.queue.capacity}, {"service_rate", s.queue.service_rate}};
  const auto& p = s.protocol;
  j["protocol"] = {{"hello_interval", to_seconds(p.hello_interval)},
                   {"tc_interval", to_seconds(p.tc_interval)},
                   {"mpr_coverage", p.mpr_coverage},
                   {"tc_redundancy", to_string(p.tc_redundancy)},
                   {"neighbor_hold_time", to_seconds(p.neighbor_hold_time)},
                   {"topology_hold_time", to_seconds(p.topology_hold_time)},
                   {"mpr_policy", to_string(p.mpr_policy)},
                   {"path_policy", to_string(p.path_policy)},
                   {"estimation_mode", to_string(p.estimation_mode)},
                   {"hello_jitter", s.hello_jitter}};
  json flows = json::array();
  for (const auto& f : s.flows) {
    flows.push_back({{"source", index(f.source)},
                     {"destination", index(f.destination)},
                     {"packet_interval", to_seconds(f.packet_interval)},
                     {"payload", f.payload},
                     {"start", to_seconds(f.start)},
                     {"stop", time_or_null(f.stop)}});
  }
  const auto& rt = s.random_traffic;
  j["traffic"] = {{"flows", flows},
                  {"random_flows",
                   {{"count", rt.count},
                    {"packet_interval", to_seconds(rt.packet_interval)},
                    {"payload", rt.payload},
                    {"start", to_seconds(rt.start)},
                    {"stop", time_or_null(rt.stop)}}},
                  {"piggyback_energy", s.piggyback_energy_on_data},
                  {"ttl", s.data_ttl}};
  j["horizon"] = to_seconds(s.horizon);
  j["sample_interval"] = to_seconds(s.sample_interval);
  return j.dump(indent);
}

}  // namespace olsrsim
