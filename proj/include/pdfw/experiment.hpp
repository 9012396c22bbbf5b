#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pdfw/config.hpp"
#include "pdfw/diagnostics.hpp"

namespace pdfw {

/// The simulated data and reconstruction problem shared by every run of one experiment.
struct ExperimentProblem {
  ImageGrid phantom;  // on the simulation grid
  SinogramData data;
  std::shared_ptr<const ParallelBeamProjector> projector;  // reconstruction grid
  std::shared_ptr<const DiffStack> diffs;
  ProblemSpec problem;
  std::vector<std::string> warnings;
};

ExperimentProblem build_problem(const ExperimentConfig& config);

Vector initial_image(const ExperimentProblem& setup, InitRule rule);

/// Long PDCP run (S2 steps) from a zero start.
Vector compute_reference(const ProblemSpec& problem, std::size_t iterations);

struct RunOutcome {
  std::string name;
  ConvergenceRecord record;
  Vector final_image;
  std::vector<std::string> warnings;
  AllocationLedger allocations;
};

struct ExperimentOutcome {
  double lipschitz = 0.0;
  double reference_cost = 0.0;
  Vector reference;
  std::vector<RunOutcome> runs;
  std::vector<std::string> warnings;
};

/// Simulates once, estimates L once, executes each configured run and writes
/// `<run>_metrics.csv`, `<run>_final.img`, `reference.img` and `ledger.txt`
/// under the output directory.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

}  // namespace pdfw
