#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "olsrsim/metrics.hpp"
#include "olsrsim/scenario.hpp"
#include "olsrsim/sim.hpp"
#include "olsrsim/types.hpp"

namespace olsrsim {

/// One compared configuration: how energy is perceived plus the protocol variant.
struct Arm {
  std::string label;
  EstimationMode mode = EstimationMode::Realistic;
  VariantConfig variant;
};

/// Parameters a sweep may vary: packet_interval (s), flow_count, base_loss,
/// max_speed (m/s), hello_interval (s), tc_interval (s).
struct Sweep {
  std::string parameter = "packet_interval";
  std::vector<double> values;
};

struct ExperimentSpec {
  std::string name;
  ScenarioConfig base;
  Sweep sweep;
  std::vector<Arm> arms;
  std::vector<std::uint64_t> seeds;
  std::string outputs = "out";
};

/// Thrown when a finished run breaks a property that must always hold
/// (energy books, Ideal inaccuracy).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> validate_experiment(const ExperimentSpec& spec);

ExperimentSpec parse_experiment_json(const std::string& text);
ExperimentSpec load_experiment_file(const std::string& path);
std::string experiment_to_json(const ExperimentSpec& spec, int indent = 2);

/// Packet-interval sweep, Ideal vs Realistic under EOLSR.
ExperimentSpec fig2_preset();
/// OLSR vs EOLSR at a node-killing traffic rate.
ExperimentSpec fig3_preset();
/// All four estimation modes at low / medium / high traffic under EOLSR.
ExperimentSpec inaccuracy_preset();

ScenarioConfig apply_sweep(ScenarioConfig base, const std::string& parameter, double value);
ScenarioConfig cell_scenario(const ExperimentSpec& spec, const Arm& arm, double sweep_value);

struct CellResult {
  std::size_t arm = 0;
  std::size_t sweep = 0;
  std::uint64_t seed = 0;
  MetricsRecord metrics;
};

/// Every (arm, sweep value, seed) cell, in that order regardless of `jobs`.
std::vector<CellResult> run_batch(const ExperimentSpec& spec, unsigned jobs = 1,
                                  SimOptions options = {});

/// Throws InvariantError on an unbalanced energy audit or non-zero Ideal error.
void check_invariants(const ExperimentSpec& spec, std::span<const CellResult> results);

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
};

Moments moments(std::span<const double> xs);

/// P(X >= wins) for X ~ Binomial(wins + losses, 1/2); ties are dropped beforehand.
double sign_test_p(int wins, int losses);

/// First node death in seconds, or the end of the run when nobody died.
double lifetime_seconds(const MetricsRecord& m);

struct CellSummary {
  std::size_t arm = 0;
  std::size_t sweep = 0;
  std::size_t runs = 0;
  Moments sent;
  Moments delivered;
  Moments inaccuracy;
  Moments lifetime;
  Moments adjustment_fraction;
};

std::vector<CellSummary> summarize(const ExperimentSpec& spec, std::span<const CellResult> results);

struct OutputFile {
  std::string name;
  std::string content;
};

std::vector<OutputFile> run_outputs(const ScenarioConfig& scenario, const MetricsRecord& m);
std::vector<OutputFile> fig2_outputs(const ExperimentSpec& spec, std::span<const CellResult> results);
std::vector<OutputFile> fig3_outputs(const ExperimentSpec& spec, std::span<const CellResult> results);
std::vector<OutputFile> inaccuracy_outputs(const ExperimentSpec& spec,
                                           std::span<const CellResult> results);

/// Run manifest: spec hash, seeds, arms, files and tool version. No wall-clock data.
OutputFile manifest(const ExperimentSpec& spec, std::string_view command,
                    std::span<const OutputFile> files);

/// Writes every file to a temporary name first and renames once all succeeded.
void write_outputs(const std::filesystem::path& dir, std::span<const OutputFile> files);

std::uint64_t fnv1a(std::string_view bytes);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace olsrsim
