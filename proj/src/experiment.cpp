#include "pdfw/experiment.hpp"

#include <cstdio>
#include <fstream>

#include "pdfw/image_io.hpp"
#include "pdfw/metrics_csv.hpp"

namespace pdfw {

ExperimentProblem build_problem(const ExperimentConfig& config) {
  config.validate();
  ExperimentProblem setup;
  const ScanGeometry geometry = config.geometry();

  const std::size_t up = config.simulation_upsample;
  setup.phantom = make_phantom(config.nx * up, config.ny * up, config.spacing / static_cast<double>(up),
                               config.phantom);
  {
    // Simulation uses its own projector on the finer grid when upsampling.
    ParallelBeamProjector sim(geometry, setup.phantom.nx, setup.phantom.ny, setup.phantom.spacing);
    setup.data = simulate_data(setup.phantom, sim, config.noise_std, config.seed, config.weighting);
  }

  const ImageGrid recon_grid(config.nx, config.ny, config.spacing);
  setup.projector = make_projector(geometry, recon_grid);
  setup.diffs = std::make_shared<const DiffStack>(config.nx, config.ny, config.offsets);
  setup.warnings = geometry_warnings(geometry, recon_grid);

  setup.problem.A = setup.projector;
  setup.problem.b = setup.data.b;
  setup.problem.w = setup.data.w;
  setup.problem.D = setup.diffs;
  setup.problem.lambda = config.lambda;
  setup.problem.lipschitz = estimate_lipschitz(setup.problem.A, setup.problem.w, *setup.diffs, config.norm);
  setup.problem.validate();
  return setup;
}

Vector initial_image(const ExperimentProblem& setup, InitRule rule) {
  const auto& p = setup.problem;
  Vector x(p.image_len(), 0.0);
  if (rule == InitRule::Zero) return x;

  // Backprojection of W b, scaled to minimize the weighted data misfit along that direction.
  Vector wb(p.data_len());
  for (std::size_t i = 0; i < wb.size(); ++i) wb[i] = p.w[i] * p.b[i];
  p.A->adjoint_add(wb, x);
  const Vector ax = apply_forward(*p.A, x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    num += ax[i] * wb[i];
    den += p.w[i] * ax[i] * ax[i];
  }
  const double c = den > 0.0 ? num / den : 0.0;
  for (auto& v : x) v *= c;
  return x;
}

Vector compute_reference(const ProblemSpec& problem, std::size_t iterations) {
  const Vector x0(problem.image_len(), 0.0);
  auto result = run_solver(problem, SolverMode::PDCP, StepSchedule::s2(), iterations, x0);
  return std::move(result.state.x);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string ledger_text(const ExperimentProblem& setup, const std::vector<RunOutcome>& runs) {
  const ProblemDims dims{setup.problem.image_len(), setup.diffs->total_len(), setup.problem.data_len()};
  std::string out = "# modeled state arrays per algorithm (4-byte elements)\n";
  for (auto algo : {MemoryAlgorithm::LALM, MemoryAlgorithm::PDCP, MemoryAlgorithm::PDFW_theta1,
                    MemoryAlgorithm::PDFW_theta0}) {
    out += memory_ledger(algo, dims, 4).report();
    out += "\n";
  }
  out += "# arrays allocated by each run\n";
  for (const auto& run : runs) {
    out += "run=" + run.name + "\n";
    for (const auto& e : run.allocations.entries()) {
      out += "  " + e.name + " space=" + std::string(to_string(e.space)) +
             " length=" + std::to_string(e.length) + (e.persistent ? " state" : " scratch") + "\n";
    }
  }
  return out;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  const ExperimentProblem setup = build_problem(config);
  const auto& problem = setup.problem;

  ExperimentOutcome outcome;
  outcome.lipschitz = problem.lipschitz;
  outcome.warnings = setup.warnings;

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError(config.output_dir.string() + ": cannot create output directory: " + ec.message());

  if (config.reference.load_path) {
    const ImageGrid ref = read_image(*config.reference.load_path);
    if (ref.nx != config.nx || ref.ny != config.ny) {
      throw ConfigError("reference.load: image is " + std::to_string(ref.nx) + "x" +
                        std::to_string(ref.ny) + ", expected " + std::to_string(config.nx) + "x" +
                        std::to_string(config.ny));
    }
    outcome.reference = ref.values;
  } else {
    outcome.reference = compute_reference(problem, config.reference.compute_iterations);
  }
  write_image(config.output_dir / "reference.img",
              ImageGrid(config.nx, config.ny, config.spacing, outcome.reference));
  write_image(config.output_dir / "phantom.img", setup.phantom);

  outcome.reference_cost = cost_value(problem, outcome.reference);
  const RoiMask roi = inscribed_circle_roi(config.nx, config.ny);

  for (const auto& run : config.runs) {
    const Vector x0 = initial_image(setup, run.x0);
    MetricsRecorder recorder(problem, outcome.reference, outcome.reference_cost, roi,
                             config.record_wall_time);
    auto result = run_solver(problem, run.mode, run.schedule, run.k_max, x0, &recorder);

    RunOutcome ro;
    ro.name = run.name;
    ro.record = recorder.record();
    ro.final_image = std::move(result.state.x);
    ro.warnings = std::move(result.warnings);
    ro.allocations = std::move(result.ledger);

    emit_metrics_csv(ro.record, config.output_dir / (run.name + "_metrics.csv"));
    write_image(config.output_dir / (run.name + "_final.img"),
                ImageGrid(config.nx, config.ny, config.spacing, ro.final_image));
    outcome.runs.push_back(std::move(ro));
  }

  write_text(config.output_dir / "ledger.txt", ledger_text(setup, outcome.runs));
  return outcome;
}

}  // namespace pdfw
