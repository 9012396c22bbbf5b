#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pdfw/ct_testbed.hpp"
#include "pdfw/regularization.hpp"
#include "pdfw/schedule.hpp"
#include "pdfw/solvers.hpp"

namespace pdfw {

enum class InitRule { Zero, Backprojection };

struct SolverRunConfig {
  std::string name;
  SolverMode mode = SolverMode::PDFW;
  StepSchedule schedule = StepSchedule::s2();
  std::size_t k_max = 0;
  InitRule x0 = InitRule::Zero;
};

struct ReferencePolicy {
  /// Load a frozen reference image when set; otherwise compute one with a long PDCP run.
  std::optional<std::filesystem::path> load_path;
  std::size_t compute_iterations = 20000;
};

/// Everything needed to reproduce one experiment. See docs/config.md for the file schema.
struct ExperimentConfig {
  std::size_t nx = 64;
  std::size_t ny = 64;
  double spacing = 1.0;

  PhantomSpec phantom;
  std::size_t simulation_upsample = 1;

  std::size_t num_views = 30;
  std::size_t num_detectors = 92;
  double detector_spacing = 1.0;
  std::optional<Vector> explicit_angles;  // radians; uniform in [0, pi) when empty

  double noise_std = 0.0;
  std::uint64_t seed = 0;
  Weighting weighting = Weighting::Uniform;

  std::vector<PixelOffset> offsets = default_offsets_2d();
  double lambda = 1.0;
  NormOptions norm;

  std::vector<SolverRunConfig> runs;
  ReferencePolicy reference;
  std::filesystem::path output_dir = "out";
  bool record_wall_time = false;

  ScanGeometry geometry() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses the JSON config text. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace pdfw
