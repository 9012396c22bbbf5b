// Command-line front end: run or validate an experiment config, print memory
// ledgers, and check step-size schedules.
//
// Exit codes: 0 success, 1 config error, 2 runtime/divergence error, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pdfw/config.hpp"
#include "pdfw/diagnostics.hpp"
#include "pdfw/experiment.hpp"
#include "pdfw/schedule.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kRuntimeError = 2, kIoError = 3 };

int cmd_run(const std::string& path, const std::string& output_override) {
  auto config = pdfw::load_config(path);
  if (!output_override.empty()) config.output_dir = output_override;
  const auto outcome = pdfw::run_experiment(config);
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("L=%.17g\nreference_cost=%.17g\n", outcome.lipschitz, outcome.reference_cost);
  for (const auto& run : outcome.runs) {
    for (const auto& w : run.warnings) std::cerr << "warning [" << run.name << "]: " << w << "\n";
    const auto& last = run.record.rows().back();
    std::printf("%s: k=%zu cost=%.17g normalized_cost=%.6e rmsd=%.6e\n", run.name.c_str(), last.k,
                last.cost, last.normalized_cost, last.rmsd);
  }
  std::printf("outputs written to %s\n", config.output_dir.string().c_str());
  return kOk;
}

int cmd_validate(const std::string& path) {
  const auto config = pdfw::load_config(path);
  const auto geometry = config.geometry();
  std::printf("config ok: %zux%zu grid, %zu views x %zu detectors, %zu offsets, %zu run(s)\n",
              config.nx, config.ny, config.num_views, config.num_detectors, config.offsets.size(),
              config.runs.size());
  for (const auto& w : pdfw::geometry_warnings(geometry, pdfw::ImageGrid(config.nx, config.ny, config.spacing))) {
    std::cerr << "warning: " << w << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual Frank-Wolfe CT reconstruction experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Simulate data, run every configured solver, write metrics");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--output-dir", output_dir, "Override the config's output directory");

  auto* validate = app.add_subcommand("validate", "Parse and validate a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  std::string algo;
  std::uint64_t n = 0, big_n = 0, m = 0, bytes = 4;
  auto* ledger = app.add_subcommand("ledger", "Print the modeled memory ledger for an algorithm");
  ledger->add_option("--algo", algo, "LALM, PDCP, PDFW_theta1 or PDFW_theta0")->required();
  ledger->add_option("--n", n, "image size")->required();
  ledger->add_option("--N", big_n, "regularization transform output size")->required();
  ledger->add_option("--m", m, "data size")->required();
  ledger->add_option("--bytes", bytes, "bytes per element");

  std::string schedule_name;
  double lipschitz = 1.0;
  std::size_t horizon = 10000;
  auto* check = app.add_subcommand("schedule-check", "Evaluate the step-size convergence conditions");
  check->add_option("--schedule", schedule_name, "S1 or S2")->required()->check(CLI::IsMember({"S1", "S2"}));
  check->add_option("--L", lipschitz, "operator norm bound")->required();
  check->add_option("--K", horizon, "horizon (>= 10)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, output_dir);
    if (*validate) return cmd_validate(config_path);
    if (*ledger) {
      const auto l = pdfw::memory_ledger(pdfw::parse_memory_algorithm(algo), {n, big_n, m}, bytes);
      std::cout << l.report();
      return kOk;
    }
    if (*check) {
      const auto schedule = schedule_name == "S1" ? pdfw::StepSchedule::s1() : pdfw::StepSchedule::s2();
      std::cout << pdfw::format_report(pdfw::validate_schedule(schedule, lipschitz, horizon));
      return kOk;
    }
  } catch (const pdfw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const pdfw::ContractViolation& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kConfigError;
  } catch (const pdfw::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const pdfw::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
