// olsrsim: run single scenarios and the batch experiments from the command line.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "olsrsim/experiments.hpp"
#include "olsrsim/scenario.hpp"
#include "olsrsim/sim.hpp"

namespace {

using namespace olsrsim;

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kValidation = 3, kInvariant = 4 };

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(std::stoull(part));
    } else {
      const auto lo = std::stoull(part.substr(0, dash));
      const auto hi = std::stoull(part.substr(dash + 1));
      if (hi < lo) throw ScenarioError("seed range '" + part + "' is descending");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  if (seeds.empty()) throw ScenarioError("no seeds given");
  return seeds;
}

std::filesystem::path output_dir(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OLSRSIM_OUT"); env && *env) return env;
  return fallback;
}

void print_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << "\n";
}

struct BatchArgs {
  std::string spec_file;
  std::string seeds;
  std::string out;
  unsigned jobs = 1;
  bool quiet = false;
};

int cmd_run(const std::string& scenario_file, std::uint64_t seed, const std::string& out,
            bool inaccuracy_rows) {
  ScenarioConfig scenario = load_scenario_file(scenario_file);
  if (auto errors = validate_scenario(scenario); !errors.empty()) {
    print_errors(errors);
    return kValidation;
  }
  SimOptions options;
  options.record_inaccuracy_rows = inaccuracy_rows;
  const MetricsRecord m = run(scenario, seed, options);
  for (const auto& a : m.audit) {
    if (!a.balanced) throw InvariantError("energy audit does not balance");
  }
  auto files = run_outputs(scenario, m);
  write_outputs(output_dir(out, "out"), files);
  std::cout << scenario.id << " seed " << seed << ": sent " << m.packets_sent << ", delivered "
            << m.packets_delivered << ", mean inaccuracy " << m.mean_inaccuracy << "\n";
  return kOk;
}

template <typename Outputs>
int cmd_batch(const std::string& command, ExperimentSpec (*preset)(), Outputs outputs,
              const BatchArgs& args) {
  ExperimentSpec spec = args.spec_file.empty() ? preset() : load_experiment_file(args.spec_file);
  if (!args.seeds.empty()) spec.seeds = parse_seed_list(args.seeds);
  if (auto errors = validate_experiment(spec); !errors.empty()) {
    print_errors(errors);
    return kValidation;
  }
  const auto results = run_batch(spec, args.jobs);
  check_invariants(spec, results);
  auto files = outputs(spec, results);
  files.push_back(manifest(spec, command, files));
  const auto dir = output_dir(args.out, spec.outputs);
  write_outputs(dir, files);
  if (!args.quiet) {
    for (const auto& c : summarize(spec, results)) {
      std::cout << spec.arms[c.arm].label << " " << spec.sweep.parameter << "="
                << spec.sweep.values[c.sweep] << ": delivered " << c.delivered.mean
                << ", inaccuracy " << c.inaccuracy.mean << ", first death " << c.lifetime.mean
                << " s\n";
    }
    std::cout << "wrote " << files.size() << " files to " << dir.string() << "\n";
  }
  return kOk;
}

void add_batch_options(CLI::App* sub, BatchArgs& args) {
  sub->add_option("--spec", args.spec_file, "Experiment spec JSON (defaults to the built-in preset)");
  sub->add_option("--seeds", args.seeds, "Seed list, e.g. 1-20 or 3,5,8");
  sub->add_option("--out", args.out, "Output directory (env OLSRSIM_OUT; default from spec)");
  sub->add_option("--jobs", args.jobs, "Parallel simulations")->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", args.quiet, "Suppress the summary on stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OLSR / EOLSR energy-aware routing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string scenario_file;
  std::uint64_t seed = 1;
  std::string run_out;
  bool inaccuracy_rows = false;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write metrics");
  run_cmd->add_option("scenario,--scenario", scenario_file, "Scenario JSON file");
  run_cmd->add_option("--seed", seed, "Seed");
  run_cmd->add_option("--out", run_out, "Output directory (env OLSRSIM_OUT; default ./out)");
  run_cmd->add_flag("--inaccuracy-rows", inaccuracy_rows,
                    "Also write every (observer, subject) inaccuracy sample");

  BatchArgs fig2_args, fig3_args, inacc_args;
  auto* fig2 = app.add_subcommand("fig2", "Ideal vs Realistic over a packet-interval sweep");
  add_batch_options(fig2, fig2_args);
  auto* fig3 = app.add_subcommand("fig3", "OLSR vs EOLSR residual energy and first node death");
  add_batch_options(fig3, fig3_args);
  auto* inacc = app.add_subcommand("inaccuracy", "Estimation modes across traffic levels");
  add_batch_options(inacc, inacc_args);

  std::string preset_name;
  auto* spec_cmd = app.add_subcommand("spec", "Print a built-in experiment spec as JSON");
  spec_cmd->add_option("name", preset_name, "fig2, fig3 or inaccuracy")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "inaccuracy"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (scenario_file.empty()) {
        std::cerr << "error: a scenario file is required\n";
        return kUsage;
      }
      return cmd_run(scenario_file, seed, run_out, inaccuracy_rows);
    }
    if (*fig2) return cmd_batch("fig2", fig2_preset, fig2_outputs, fig2_args);
    if (*fig3) return cmd_batch("fig3", fig3_preset, fig3_outputs, fig3_args);
    if (*inacc) return cmd_batch("inaccuracy", inaccuracy_preset, inaccuracy_outputs, inacc_args);
    if (*spec_cmd) {
      const auto spec = preset_name == "fig2"   ? fig2_preset()
                        : preset_name == "fig3" ? fig3_preset()
                                                : inaccuracy_preset();
      std::cout << experiment_to_json(spec) << "\n";
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kUsage;
}
