#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "olsrsim/message.hpp"
#include "olsrsim/metrics.hpp"
#include "olsrsim/node_state.hpp"
#include "olsrsim/olsr.hpp"
#include "olsrsim/rng.hpp"
#include "olsrsim/scenario.hpp"

namespace olsrsim {

/// Ground-truth batteries. All arithmetic is integer nanojoules; a debit that
/// exceeds the remaining charge empties the battery and the excess is kept
/// as `shortfall` so the books still balance.
class EnergyLedger {
 public:
  struct Account {
    Energy initial;
    Energy residual;
    bool alive = true;
    Energy idle_requested;
    std::uint64_t tx_frames = 0;
    std::uint64_t rx_frames = 0;
    Energy shortfall;
    SimTime settled_at{0};
    std::optional<SimTime> died_at;
  };

  EnergyLedger() = default;
  EnergyLedger(std::size_t node_count, const EnergyConfig& config);

  /// Idle drain for `dt`, floored at zero; a node reaching 0 J dies.
  void consume_idle(NodeId node, SimTime dt);
  /// Bring the idle drain up to `now`.
  void settle(NodeId node, SimTime now);
  /// One transmitted / received frame. Returns whether the node is still alive.
  bool debit_tx(NodeId node, SimTime now);
  bool debit_rx(NodeId node, SimTime now);

  Energy residual(NodeId node) const { return accounts_[index(node)].residual; }
  /// Residual including idle drain not yet settled; does not mutate.
  Energy residual_at(NodeId node, SimTime now) const;
  bool alive(NodeId node) const { return accounts_[index(node)].alive; }
  const Account& account(NodeId node) const { return accounts_[index(node)]; }
  std::size_t size() const { return accounts_.size(); }

  /// initial - residual == idle + tx + rx - shortfall, exactly.
  EnergyAudit audit(NodeId node) const;
  std::optional<SimTime> first_death() const;

 private:
  void debit(Account& a, Energy amount, SimTime at);

  EnergyConfig config_;
  std::vector<Account> accounts_;
};

/// A message on the air, with the per-hop header the link layer adds.
struct Frame {
  Message msg;
  NodeId sender{};
  std::optional<NodeId> next_hop;  // unicast when set
  Energy sender_energy;            // transmitter's battery, stamped on service
  SimTime stamped_at{0};
};

using FramePtr = std::shared_ptr<const Frame>;

/// Bounded FIFO; the frame in service still counts toward capacity.
class TxQueue {
 public:
  explicit TxQueue(std::uint32_t capacity = 50) : capacity_(capacity) {}

  bool push(FramePtr f);
  FramePtr pop();
  void clear() { frames_.clear(); }

  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  std::uint32_t capacity() const { return capacity_; }
  std::uint64_t drops() const { return drops_; }
  double fill() const { return static_cast<double>(frames_.size()) / capacity_; }

  bool busy = false;

 private:
  std::uint32_t capacity_;
  std::deque<FramePtr> frames_;
  std::uint64_t drops_ = 0;
};

/// Piecewise-linear trajectories; every node draws from its own stream.
class Mobility {
 public:
  Mobility() = default;
  Mobility(const MobilityConfig& config, std::vector<Position> start, double width, double height,
           std::uint64_t seed);

  /// Position at `t`. Queries must not go backwards in time per node.
  Position position(NodeId node, SimTime t);

 private:
  struct Track {
    Position from;
    Position to;
    double depart = 0.0;
    double arrive = 0.0;
    double resume = 0.0;  // end of the pause after arriving
    Rng rng{0, 0};
  };

  void next_leg(Track& tr);

  MobilityConfig config_;
  double width_ = 0.0;
  double height_ = 0.0;
  std::vector<Track> tracks_;
};

/// Seeded placement; retries until connected under the unit-disk model when
/// the scenario asks for it.
std::vector<Position> place_nodes(const ScenarioConfig& s, std::uint64_t seed);

bool unit_disk_connected(std::span<const Position> positions, double range);

/// Per-TC delivery instrumentation.
struct FloodRecord {
  NodeId originator{};
  std::uint32_t seq = 0;
  SimTime emitted_at{0};
  std::vector<bool> reached;
  std::uint32_t retransmissions = 0;

  std::size_t reach_count() const;
};

struct NodeSnapshot {
  NodeId node{};
  std::vector<NodeId> symmetric_neighbors;
  std::set<NodeId> mprs;
  RoutingTable routes;
};

struct SimOptions {
  bool record_inaccuracy_rows = false;
  /// Track every TC originated at or after this time.
  std::optional<SimTime> trace_floods_from;
};

/// One deterministic run of a scenario.
class Simulator {
 public:
  Simulator(ScenarioConfig scenario, std::uint64_t seed, SimOptions options = {});

  /// Runs to the horizon (or until every node is dead) and closes the books.
  MetricsRecord run();

  /// Process all events with timestamp <= t.
  void run_until(SimTime t);

  SimTime now() const { return now_; }
  const ScenarioConfig& scenario() const { return scenario_; }
  const NodeState& node(NodeId n) const { return nodes_[index(n)]; }
  const EnergyLedger& ledger() const { return ledger_; }
  const std::vector<FlowConfig>& flows() const { return flows_; }
  std::span<const Position> initial_positions() const { return start_positions_; }
  const std::vector<FloodRecord>& floods() const { return flood_list_; }
  const MetricsRecord& metrics() const { return metrics_; }

  /// Neighbor set, MPR set and routing table under the configured policy.
  NodeSnapshot inspect(NodeId n);

  /// Enqueue a frame at `from` as if its protocol stack had produced it.
  void transmit(Frame frame, NodeId from);

 private:
  enum class EventType : std::uint8_t { Hello, Tc, ServiceDone, Receive, FlowTick, Sample };

  struct Event {
    SimTime at{0};
    std::uint64_t seq = 0;
    EventType type = EventType::Sample;
    NodeId node{};
    std::uint32_t arg = 0;
    FramePtr frame;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  struct RouteCache {
    std::uint64_t topology_version = ~0ULL;
    std::uint64_t energy_version = ~0ULL;
    std::uint64_t ledger_version = ~0ULL;
    SimTime at{-1};
    std::map<NodeId, std::optional<RoutingEntry>> entries;
  };

  void schedule(SimTime at, EventType type, NodeId node, std::uint32_t arg = 0,
                FramePtr frame = nullptr);
  void dispatch(const Event& e);

  void on_hello_timer(NodeId n);
  void on_tc_timer(NodeId n);
  void on_service_done(NodeId n);
  void on_receive(NodeId n, const FramePtr& frame);
  void on_flow_tick(std::uint32_t flow);
  void on_sample();

  void forward_data(NodeId n, Message msg);
  std::optional<RoutingEntry> route_for(NodeId n, NodeId dest);
  void start_service(NodeId n);
  void kill_queue(NodeId n);
  bool settle(NodeId n);

  SimTime jittered(SimTime interval, NodeId n);
  double perceived_or_prior(NodeId observer, NodeId subject);
  EnergyLookup energy_lookup(NodeId observer);
  RouteInputs route_inputs(NodeId observer, std::vector<double>& energy_buf);
  std::optional<double> ground_truth(NodeId subject) const;

  ScenarioConfig scenario_;
  std::uint64_t seed_;
  SimOptions options_;

  std::vector<NodeState> nodes_;
  std::vector<TxQueue> queues_;
  std::vector<RouteCache> route_cache_;
  std::vector<std::uint32_t> data_seq_;
  EnergyLedger ledger_;
  std::uint64_t ledger_version_ = 0;
  Mobility mobility_;
  std::vector<Position> start_positions_;
  std::vector<FlowConfig> flows_;

  Rng jitter_rng_;
  Rng loss_rng_;

  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t next_seq_ = 0;
  SimTime now_{0};
  bool finished_ = false;

  std::map<std::pair<NodeId, std::uint32_t>, std::size_t> flood_index_;
  std::vector<FloodRecord> flood_list_;

  MetricsRecord metrics_;
  double error_sum_ = 0.0;
};

/// Validate, run and return metrics. Throws ScenarioError on invalid input.
MetricsRecord run(const ScenarioConfig& scenario, std::uint64_t seed, SimOptions options = {});

}  // namespace olsrsim
