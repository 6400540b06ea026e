#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "olsrsim/types.hpp"

namespace olsrsim {

/// A residual-energy value as announced by `subject`, stamped with the
/// subject's own emission time.
struct EnergyReport {
  NodeId subject{};
  double energy = 0.0;  // joules
  SimTime reported_at{0};
  SimTime received_at{0};
};

/// What one observer believes about everyone else's battery.
///
/// Keeps the most recent reports per subject and the consumption rate derived
/// from the two newest of them. A rate exists only after two reports with
/// distinct timestamps since the subject was last deemed unreachable.
class PerceivedEnergyRepo {
 public:
  static constexpr std::size_t kHistoryDepth = 4;

  PerceivedEnergyRepo() = default;
  explicit PerceivedEnergyRepo(NodeId owner) : owner_(owner) {}

  NodeId owner() const { return owner_; }

  /// Returns false when the report is stale (older than or equal to the
  /// newest stored timestamp) and was ignored.
  bool record_report(const EnergyReport& r);

  /// Forget a subject: history cleared, rate unknown.
  void mark_unreachable(NodeId subject);

  /// Joules per second, non-negative.
  std::optional<double> rate(NodeId subject) const;
  const EnergyReport* latest(NodeId subject) const;
  std::span<const EnergyReport> history(NodeId subject) const;

  /// Arithmetic mean of the known rates of every subject other than `subject`.
  std::optional<double> mean_rate_excluding(NodeId subject) const;

  /// The observer's own battery readings, used as the last-resort rate.
  void record_own(SimTime at, Energy residual);
  std::optional<double> own_rate() const;

  std::vector<NodeId> subjects() const;
  bool knows(NodeId subject) const { return subjects_.contains(subject); }

  /// Bumped whenever a report is accepted or a subject is forgotten.
  std::uint64_t version() const { return version_; }

 private:
  struct Subject {
    std::vector<EnergyReport> reports;  // sorted by reported_at
    std::optional<double> rate;
  };

  static std::optional<double> rate_from(std::span<const EnergyReport> reports);

  NodeId owner_{};
  std::map<NodeId, Subject> subjects_;
  std::vector<EnergyReport> own_;
  std::uint64_t version_ = 0;
};

struct Perception {
  double joules = 0.0;
  bool adjusted = false;  // a consumption rate was applied
};

/// Perceived residual energy of `subject` as seen from `repo`'s owner.
///
/// `ground_truth` is consulted only in Ideal mode. `own_rate` is the
/// observer's own drain rate, the final fallback of Smart Prediction.
std::optional<Perception> perceive(const PerceivedEnergyRepo& repo, NodeId subject, SimTime now,
                                   EstimationMode mode, std::optional<double> ground_truth,
                                   std::optional<double> own_rate);

struct InaccuracySample {
  NodeId observer{};
  NodeId subject{};
  SimTime at{0};
  double perceived = 0.0;
  double actual = 0.0;
  double error = 0.0;  // |perceived - actual| / initial energy
  bool adjusted = false;
};

/// One sample per (alive observer, alive subject != observer) pair where the
/// observer holds at least one report about the subject.
///
/// `repos[i]` belongs to node i; `actual` and `alive` are ground truth.
std::vector<InaccuracySample> inaccuracy_snapshot(std::span<const PerceivedEnergyRepo* const> repos,
                                                  std::span<const Energy> actual,
                                                  std::span<const std::uint8_t> alive, SimTime now,
                                                  EstimationMode mode, Energy initial);

double mean_error(std::span<const InaccuracySample> samples);

}  // namespace olsrsim
