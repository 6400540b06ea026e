#include "olsrsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace olsrsim {

namespace {

// RNG stream identifiers; each concern draws from its own stream so that,
// e.g., adding a flow does not perturb node placement.
enum Stream : std::uint64_t {
  kPlacement = 11,
  kMobility = 12,
  kJitter = 13,
  kLoss = 14,
  kTraffic = 15,
};

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

// --- EnergyLedger ----------------------------------------------------------

EnergyLedger::EnergyLedger(std::size_t node_count, const EnergyConfig& config)
    : config_(config), accounts_(node_count) {
  for (auto& a : accounts_) {
    a.initial = config.initial;
    a.residual = config.initial;
  }
}

void EnergyLedger::debit(Account& a, Energy amount, SimTime at) {
  if (amount < a.residual) {
    a.residual -= amount;
    return;
  }
  a.shortfall += amount - a.residual;
  a.residual = Energy{};
  a.alive = false;
  a.died_at = at;
}

void EnergyLedger::settle(NodeId node, SimTime now) {
  auto& a = accounts_[index(node)];
  if (now <= a.settled_at) return;
  const SimTime dt = now - a.settled_at;
  if (a.alive) {
    const std::int64_t per_ms = config_.idle_per_second.as_nanojoules() / 1000;
    const Energy amount = Energy::nanojoules(per_ms * dt.count());
    if (per_ms > 0 && amount.as_nanojoules() > 0) {
      a.idle_requested += amount;
      SimTime death = now;
      if (!(amount < a.residual)) {
        const std::int64_t ms = (a.residual.as_nanojoules() + per_ms - 1) / per_ms;
        death = a.settled_at + SimTime{ms};
      }
      debit(a, amount, death);
    }
  }
  a.settled_at = now;
}

void EnergyLedger::consume_idle(NodeId node, SimTime dt) {
  settle(node, accounts_[index(node)].settled_at + dt);
}

bool EnergyLedger::debit_tx(NodeId node, SimTime now) {
  settle(node, now);
  auto& a = accounts_[index(node)];
  if (!a.alive) return false;
  ++a.tx_frames;
  debit(a, config_.tx_per_packet, now);
  return a.alive;
}

bool EnergyLedger::debit_rx(NodeId node, SimTime now) {
  settle(node, now);
  auto& a = accounts_[index(node)];
  if (!a.alive) return false;
  ++a.rx_frames;
  debit(a, config_.rx_per_packet, now);
  return a.alive;
}

Energy EnergyLedger::residual_at(NodeId node, SimTime now) const {
  const auto& a = accounts_[index(node)];
  if (!a.alive) return Energy{};
  if (now <= a.settled_at) return a.residual;
  const std::int64_t per_ms = config_.idle_per_second.as_nanojoules() / 1000;
  const Energy pending = Energy::nanojoules(per_ms * (now - a.settled_at).count());
  return pending < a.residual ? a.residual - pending : Energy{};
}

EnergyAudit EnergyLedger::audit(NodeId node) const {
  const auto& a = accounts_[index(node)];
  EnergyAudit out{node,        a.initial,   a.residual, a.idle_requested,
                  a.tx_frames, a.rx_frames, a.shortfall, false};
  const Energy spent = a.initial - a.residual;
  const Energy accounted = a.idle_requested + config_.tx_per_packet * a.tx_frames +
                           config_.rx_per_packet * static_cast<std::int64_t>(a.rx_frames) -
                           a.shortfall;
  out.balanced = spent == accounted && a.residual >= Energy{} && a.residual <= a.initial &&
                 (a.alive == (a.residual > Energy{}));
  return out;
}

std::optional<SimTime> EnergyLedger::first_death() const {
  std::optional<SimTime> first;
  for (const auto& a : accounts_) {
    if (a.died_at && (!first || *a.died_at < *first)) first = a.died_at;
  }
  return first;
}

// --- TxQueue ---------------------------------------------------------------

bool TxQueue::push(FramePtr f) {
  if (frames_.size() >= capacity_) {
    ++drops_;
    return false;
  }
  frames_.push_back(std::move(f));
  return true;
}

FramePtr TxQueue::pop() {
  if (frames_.empty()) return nullptr;
  FramePtr f = std::move(frames_.front());
  frames_.pop_front();
  return f;
}

// --- Mobility --------------------------------------------------------------

Mobility::Mobility(const MobilityConfig& config, std::vector<Position> start, double width,
                   double height, std::uint64_t seed)
    : config_(config), width_(width), height_(height) {
  tracks_.reserve(start.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    Track tr;
    tr.from = tr.to = start[i];
    tr.rng = Rng(seed, kMobility, i);
    tracks_.push_back(tr);
  }
}

void Mobility::next_leg(Track& tr) {
  tr.from = tr.to;
  tr.to = {tr.rng.uniform(0.0, width_), tr.rng.uniform(0.0, height_)};
  const double speed = tr.rng.uniform(config_.min_speed, config_.max_speed);
  tr.depart = tr.resume;
  tr.arrive = tr.depart + distance(tr.from, tr.to) / speed;
  tr.resume = tr.arrive + to_seconds(config_.pause);
}

Position Mobility::position(NodeId node, SimTime t) {
  auto& tr = tracks_[index(node)];
  if (config_.kind == MobilityKind::Static) return tr.from;
  const double ts = to_seconds(t);
  while (ts >= tr.resume) next_leg(tr);
  if (ts <= tr.depart) return tr.from;
  if (ts >= tr.arrive) return tr.to;
  const double f = (ts - tr.depart) / (tr.arrive - tr.depart);
  return {tr.from.x + f * (tr.to.x - tr.from.x), tr.from.y + f * (tr.to.y - tr.from.y)};
}

// --- Placement -------------------------------------------------------------

bool unit_disk_connected(std::span<const Position> positions, double range) {
  if (positions.empty()) return true;
  std::vector<bool> seen(positions.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < positions.size(); ++v) {
      if (!seen[v] && distance(positions[u], positions[v]) <= range) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == positions.size();
}

std::vector<Position> place_nodes(const ScenarioConfig& s, std::uint64_t seed) {
  if (!s.positions.empty()) return s.positions;
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(seed, kPlacement, static_cast<std::uint64_t>(attempt));
    std::vector<Position> pos(s.node_count);
    for (auto& p : pos) p = {rng.uniform(0.0, s.width), rng.uniform(0.0, s.height)};
    if (!s.require_connected || unit_disk_connected(pos, s.radio.range)) return pos;
  }
  throw ScenarioError("could not place a connected topology; enlarge the range or shrink the area");
}

std::size_t FloodRecord::reach_count() const {
  return static_cast<std::size_t>(std::count(reached.begin(), reached.end(), true));
}

// --- Simulator -------------------------------------------------------------

Simulator::Simulator(ScenarioConfig scenario, std::uint64_t seed, SimOptions options)
    : scenario_(std::move(scenario)),
      seed_(seed),
      options_(options),
      jitter_rng_(seed, kJitter),
      loss_rng_(seed, kLoss) {
  if (auto errors = validate_scenario(scenario_); !errors.empty()) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < errors.size(); ++i) msg << (i ? "; " : "") << errors[i];
    throw ScenarioError(msg.str());
  }
  const auto n = scenario_.node_count;
  nodes_.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) nodes_.emplace_back(NodeId{i});
  queues_.assign(n, TxQueue(scenario_.queue.capacity));
  route_cache_.resize(n);
  data_seq_.assign(n, 0);
  ledger_ = EnergyLedger(n, scenario_.energy);
  start_positions_ = place_nodes(scenario_, seed);
  mobility_ = Mobility(scenario_.mobility, start_positions_, scenario_.width, scenario_.height, seed);

  flows_ = scenario_.flows;
  const auto& rt = scenario_.random_traffic;
  if (rt.count > 0) {
    Rng rng(seed, kTraffic);
    std::set<std::pair<std::uint32_t, std::uint32_t>> used;
    for (const auto& f : flows_) used.insert({index(f.source), index(f.destination)});
    const std::uint64_t max_pairs = static_cast<std::uint64_t>(n) * (n - 1);
    for (std::uint32_t k = 0; k < rt.count && used.size() < max_pairs;) {
      auto src = static_cast<std::uint32_t>(rng.below(n));
      auto dst = static_cast<std::uint32_t>(rng.below(n - 1));
      if (dst >= src) ++dst;
      if (!used.insert({src, dst}).second) continue;
      flows_.push_back({NodeId{src}, NodeId{dst}, rt.packet_interval, rt.payload, rt.start, rt.stop});
      ++k;
    }
  }

  metrics_.scenario_id = scenario_.id;
  metrics_.seed = seed;

  const auto& p = scenario_.protocol;
  for (std::uint32_t i = 0; i < n; ++i) {
    auto hello_at = SimTime{static_cast<std::int64_t>(jitter_rng_.below(p.hello_interval.count()))};
    auto tc_at = p.hello_interval +
                 SimTime{static_cast<std::int64_t>(jitter_rng_.below(p.tc_interval.count()))};
    schedule(hello_at, EventType::Hello, NodeId{i});
    schedule(tc_at, EventType::Tc, NodeId{i});
  }
  Rng phase(seed, kTraffic, 1);
  for (std::uint32_t k = 0; k < flows_.size(); ++k) {
    const auto& f = flows_[k];
    auto offset = SimTime{static_cast<std::int64_t>(phase.below(f.packet_interval.count()))};
    schedule(f.start + offset, EventType::FlowTick, f.source, k);
  }
  schedule(SimTime{0}, EventType::Sample, NodeId{0});
}

void Simulator::schedule(SimTime at, EventType type, NodeId node, std::uint32_t arg,
                         FramePtr frame) {
  events_.push(Event{at, next_seq_++, type, node, arg, std::move(frame)});
}

void Simulator::run_until(SimTime t) {
  while (!events_.empty() && events_.top().at <= t) {
    Event e = events_.top();
    events_.pop();
    now_ = e.at;
    dispatch(e);
    if (finished_) return;
  }
  if (t > now_) now_ = t;
}

MetricsRecord Simulator::run() {
  run_until(scenario_.horizon);
  const SimTime end = finished_ ? now_ : scenario_.horizon;
  now_ = end;
  metrics_.ended_at = end;
  metrics_.audit.clear();
  std::uint64_t malformed = 0;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    ledger_.settle(NodeId{i}, end);
    metrics_.audit.push_back(ledger_.audit(NodeId{i}));
    malformed += nodes_[i].malformed_dropped;
  }
  metrics_.counters.malformed_dropped = malformed;
  metrics_.first_node_death = ledger_.first_death();
  metrics_.mean_inaccuracy =
      metrics_.inaccuracy_samples == 0 ? 0.0
                                       : error_sum_ / static_cast<double>(metrics_.inaccuracy_samples);
  return metrics_;
}

void Simulator::dispatch(const Event& e) {
  switch (e.type) {
    case EventType::Hello:
      on_hello_timer(e.node);
      break;
    case EventType::Tc:
      on_tc_timer(e.node);
      break;
    case EventType::ServiceDone:
      on_service_done(e.node);
      break;
    case EventType::Receive:
      on_receive(e.node, e.frame);
      break;
    case EventType::FlowTick:
      on_flow_tick(e.arg);
      break;
    case EventType::Sample:
      on_sample();
      break;
  }
  bool any_alive = false;
  for (std::uint32_t i = 0; i < nodes_.size() && !any_alive; ++i) any_alive = ledger_.alive(NodeId{i});
  if (!any_alive) finished_ = true;
}

bool Simulator::settle(NodeId n) {
  ledger_.settle(n, now_);
  return ledger_.alive(n);
}

SimTime Simulator::jittered(SimTime interval, NodeId) {
  const double j = scenario_.hello_jitter;
  const double offset = jitter_rng_.uniform(-j, j) * static_cast<double>(interval.count());
  return std::max(SimTime{1}, interval + SimTime{std::llround(offset)});
}

std::optional<double> Simulator::ground_truth(NodeId subject) const {
  return ledger_.residual_at(subject, now_).as_joules();
}

double Simulator::perceived_or_prior(NodeId observer, NodeId subject) {
  const auto& repo = nodes_[index(observer)].energy;
  const auto mode = scenario_.protocol.estimation_mode;
  auto p = perceive(repo, subject, now_, mode,
                    mode == EstimationMode::Ideal ? ground_truth(subject) : std::nullopt,
                    repo.own_rate());
  // Nothing heard yet: assume a full battery, the state every node starts in.
  return p ? p->joules : scenario_.energy.initial.as_joules();
}

EnergyLookup Simulator::energy_lookup(NodeId observer) {
  if (scenario_.protocol.mpr_policy != MprPolicy::EnergyAware) return {};
  return [this, observer](NodeId subject) { return perceived_or_prior(observer, subject); };
}

RouteInputs Simulator::route_inputs(NodeId observer, std::vector<double>& energy_buf) {
  const auto n = nodes_.size();
  energy_buf.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    energy_buf[i] = i == index(observer) ? ledger_.residual(observer).as_joules()
                                         : perceived_or_prior(observer, NodeId{i});
  }
  RouteInputs in;
  in.node_energy = energy_buf;
  in.low_energy_threshold =
      scenario_.energy.low_energy_threshold * scenario_.energy.initial.as_joules();
  in.default_bandwidth = scenario_.radio.default_link_bandwidth;
  in.local_link_bandwidth = [this, observer](NodeId nb) {
    // Rate tiers by distance, scaled by the local queue headroom.
    const double d = distance(mobility_.position(observer, now_), mobility_.position(nb, now_));
    const double r = scenario_.radio.range;
    const double tier = d <= 0.5 * r ? 1.0 : (d <= 0.75 * r ? 0.5 : 0.25);
    return scenario_.radio.nominal_bandwidth * tier * (1.0 - queues_[index(observer)].fill());
  };
  return in;
}

std::optional<RoutingEntry> Simulator::route_for(NodeId n, NodeId dest) {
  const auto policy = scenario_.protocol.path_policy;
  auto& state = nodes_[index(n)];
  if (policy == PathPolicy::ShortestHop) return route_to(state, dest, policy);

  const auto mode = scenario_.protocol.estimation_mode;
  auto& rc = route_cache_[index(n)];
  const std::uint64_t ledger_key = mode == EstimationMode::Ideal ? ledger_version_ : 0;
  const SimTime time_key = mode == EstimationMode::Realistic ? SimTime{0} : now_;
  if (rc.topology_version != state.topology_version ||
      rc.energy_version != state.energy.version() || rc.ledger_version != ledger_key ||
      rc.at != time_key) {
    rc.entries.clear();
    rc.topology_version = state.topology_version;
    rc.energy_version = state.energy.version();
    rc.ledger_version = ledger_key;
    rc.at = time_key;
  }
  if (auto it = rc.entries.find(dest); it != rc.entries.end()) return it->second;
  std::vector<double> buf;
  auto entry = route_to(state, dest, policy, route_inputs(n, buf));
  rc.entries.emplace(dest, entry);
  return entry;
}

NodeSnapshot Simulator::inspect(NodeId n) {
  const auto& state = nodes_[index(n)];
  std::vector<double> buf;
  return {n, state.symmetric_neighbors(), state.mprs,
          compute_routing_table(state, scenario_.protocol.path_policy, route_inputs(n, buf))};
}

void Simulator::transmit(Frame frame, NodeId from) {
  if (!settle(from)) {
    ++metrics_.counters.dead_sender_discards;
    return;
  }
  auto& q = queues_[index(from)];
  if (!q.push(std::make_shared<const Frame>(std::move(frame)))) {
    ++metrics_.counters.queue_drops;
    return;
  }
  if (!q.busy) start_service(from);
}

void Simulator::start_service(NodeId n) {
  queues_[index(n)].busy = true;
  schedule(now_ + scenario_.queue.service_time(), EventType::ServiceDone, n);
}

void Simulator::kill_queue(NodeId n) {
  auto& q = queues_[index(n)];
  q.clear();
  q.busy = false;
}

void Simulator::on_service_done(NodeId n) {
  auto& q = queues_[index(n)];
  FramePtr frame = q.pop();
  if (!frame) {
    q.busy = false;
    return;
  }
  if (!settle(n)) {
    ++metrics_.counters.dead_sender_discards;
    kill_queue(n);
    return;
  }
  const bool alive = ledger_.debit_tx(n, now_);
  ++ledger_version_;
  ++metrics_.counters.frames_serviced;
  if (!alive) {
    kill_queue(n);
    return;
  }

  if (frame->msg.kind() == MessageKind::Data) {
    auto stamped = std::make_shared<Frame>(*frame);
    stamped->sender = n;
    stamped->sender_energy = ledger_.residual(n);
    stamped->stamped_at = now_;
    frame = std::move(stamped);
  }

  const auto& radio = scenario_.radio;
  const Position here = mobility_.position(n, now_);
  auto deliver = [&](NodeId to) {
    if (radio.base_loss > 0.0 && loss_rng_.uniform() < radio.base_loss) {
      ++metrics_.counters.loss_drops;
      return;
    }
    schedule(now_ + radio.propagation_delay, EventType::Receive, to, 0, frame);
  };

  if (frame->next_hop) {
    const NodeId to = *frame->next_hop;
    if (ledger_.alive(to) && distance(here, mobility_.position(to, now_)) <= radio.range) {
      deliver(to);
    } else {
      ++metrics_.counters.link_breaks;
    }
  } else {
    for (std::uint32_t j = 0; j < nodes_.size(); ++j) {
      const NodeId to{j};
      if (to == n || !ledger_.alive(to)) continue;
      if (distance(here, mobility_.position(to, now_)) <= radio.range) deliver(to);
    }
  }

  if (q.empty()) {
    q.busy = false;
  } else {
    start_service(n);
  }
}

void Simulator::on_receive(NodeId n, const FramePtr& frame) {
  if (!settle(n)) return;
  const bool alive = ledger_.debit_rx(n, now_);
  ++ledger_version_;
  if (!alive) {
    kill_queue(n);
    return;
  }

  const auto& params = scenario_.protocol;
  auto& state = nodes_[index(n)];
  const auto lookup = energy_lookup(n);
  expire_state(state, now_, params, lookup);

  const Message& msg = frame->msg;
  switch (msg.kind()) {
    case MessageKind::Hello:
      process_hello(state, msg, frame->sender, now_, params, lookup);
      break;
    case MessageKind::Tc: {
      const auto out = process_tc(state, msg, frame->sender, now_, params);
      auto rec = flood_index_.find({msg.originator, msg.seq});
      if (rec != flood_index_.end()) flood_list_[rec->second].reached[index(n)] = true;
      if (out.forward) {
        ++metrics_.counters.tc_forwarded;
        if (rec != flood_index_.end()) ++flood_list_[rec->second].retransmissions;
        transmit(Frame{msg, n, std::nullopt, Energy{}, now_}, n);
      }
      break;
    }
    case MessageKind::Data:
      if (scenario_.piggyback_energy_on_data) {
        state.energy.record_report(
            {frame->sender, frame->sender_energy.as_joules(), frame->stamped_at, now_});
      }
      forward_data(n, msg);
      break;
  }
}

void Simulator::forward_data(NodeId n, Message msg) {
  auto& d = msg.data();
  if (d.destination == n) {
    ++metrics_.packets_delivered;
    return;
  }
  if (d.ttl == 0) {
    ++metrics_.counters.ttl_drops;
    return;
  }
  auto route = route_for(n, d.destination);
  if (!route) {
    ++metrics_.counters.routing_failures;
    return;
  }
  --d.ttl;
  ++metrics_.counters.data_forwarded;
  transmit(Frame{std::move(msg), n, route->next_hop, Energy{}, now_}, n);
}

void Simulator::on_hello_timer(NodeId n) {
  if (!settle(n)) return;
  const auto& params = scenario_.protocol;
  auto& state = nodes_[index(n)];
  const auto lookup = energy_lookup(n);
  expire_state(state, now_, params, lookup);
  // Energy rankings drift between neighborhood changes; refresh before
  // announcing MPR choices.
  if (params.mpr_policy == MprPolicy::EnergyAware) recompute_mprs(state, params, lookup);
  Message hello = generate_hello(state, now_, ledger_.residual(n));
  ++metrics_.counters.hello_sent;
  transmit(Frame{std::move(hello), n, std::nullopt, Energy{}, now_}, n);
  schedule(now_ + jittered(params.hello_interval, n), EventType::Hello, n);
}

void Simulator::on_tc_timer(NodeId n) {
  if (!settle(n)) return;
  const auto& params = scenario_.protocol;
  auto& state = nodes_[index(n)];
  expire_state(state, now_, params, energy_lookup(n));
  if (auto tc = generate_tc(state, now_, ledger_.residual(n), params)) {
    ++metrics_.counters.tc_sent;
    if (options_.trace_floods_from && now_ >= *options_.trace_floods_from) {
      FloodRecord rec{n, tc->seq, now_, std::vector<bool>(nodes_.size(), false), 0};
      rec.reached[index(n)] = true;
      flood_index_[{n, tc->seq}] = flood_list_.size();
      flood_list_.push_back(std::move(rec));
    }
    transmit(Frame{std::move(*tc), n, std::nullopt, Energy{}, now_}, n);
  }
  schedule(now_ + jittered(params.tc_interval, n), EventType::Tc, n);
}

void Simulator::on_flow_tick(std::uint32_t k) {
  const auto& f = flows_[k];
  const SimTime stop = f.stop.value_or(scenario_.horizon);
  if (now_ > stop) return;
  const NodeId src = f.source;
  if (!settle(src)) return;
  ++metrics_.packets_sent;
  auto& state = nodes_[index(src)];
  expire_state(state, now_, scenario_.protocol, energy_lookup(src));
  Message msg{src, ++data_seq_[index(src)], now_,
              DataBody{src, f.destination, f.payload, scenario_.data_ttl}};
  forward_data(src, std::move(msg));
  if (now_ + f.packet_interval <= stop) {
    schedule(now_ + f.packet_interval, EventType::FlowTick, src, k);
  }
}

void Simulator::on_sample() {
  const auto n = nodes_.size();
  std::vector<Energy> actual(n);
  std::vector<std::uint8_t> alive_bytes(n);
  std::vector<const PerceivedEnergyRepo*> repos(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    ledger_.settle(NodeId{i}, now_);
    actual[i] = ledger_.residual(NodeId{i});
    alive_bytes[i] = ledger_.alive(NodeId{i}) ? 1 : 0;
    repos[i] = &nodes_[i].energy;
  }
  const auto samples =
      inaccuracy_snapshot(repos, actual, alive_bytes, now_,
                          scenario_.protocol.estimation_mode, scenario_.energy.initial);

  std::vector<double> per_subject_sum(n, 0.0);
  std::vector<std::uint32_t> per_subject_count(n, 0);
  for (const auto& s : samples) {
    error_sum_ += s.error;
    per_subject_sum[index(s.subject)] += s.error;
    ++per_subject_count[index(s.subject)];
    if (s.adjusted) ++metrics_.counters.adjusted_perceptions;
  }
  metrics_.inaccuracy_samples += samples.size();
  metrics_.counters.perceptions += samples.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    const double mean = per_subject_count[i] ? per_subject_sum[i] / per_subject_count[i] : 0.0;
    metrics_.samples.push_back({now_, NodeId{i}, actual[i], alive_bytes[i] != 0, mean});
  }
  if (options_.record_inaccuracy_rows) {
    metrics_.inaccuracy_rows.insert(metrics_.inaccuracy_rows.end(), samples.begin(), samples.end());
  }
  if (now_ + scenario_.sample_interval <= scenario_.horizon) {
    schedule(now_ + scenario_.sample_interval, EventType::Sample, NodeId{0});
  }
}

MetricsRecord run(const ScenarioConfig& scenario, std::uint64_t seed, SimOptions options) {
  Simulator sim(scenario, seed, options);
  return sim.run();
}

}  // namespace olsrsim
