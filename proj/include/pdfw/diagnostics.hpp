#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdfw/ct_testbed.hpp"
#include "pdfw/solvers.hpp"

namespace pdfw {

/// 1/2 ||A x - b||_W^2 + lambda ||D x||_1
double cost_value(const ProblemSpec& problem, std::span<const double> x);

/// Convex conjugate of g(s) = 1/2 ||s - b||_W^2:
/// g*(t) = 1/2 ||t + W b||_{W^-1}^2 - 1/2 ||b||_W^2.
double datafit_conjugate(const ProblemSpec& problem, std::span<const double> t);

/// (cost_k - cost_ref) / cost_ref, signed.
double normalized_cost(double cost_k, double cost_ref);

struct RoiMask {
  std::vector<std::size_t> indices;
};

/// Pixels whose centres lie in the circle inscribed in the grid.
RoiMask inscribed_circle_roi(std::size_t nx, std::size_t ny);

double rmsd(std::span<const double> x, std::span<const double> x_ref, const RoiMask& roi);

// ---------------------------------------------------------------------------
// Memory accounting

enum class MemoryAlgorithm { LALM, PDCP, PDFW_theta1, PDFW_theta0 };

MemoryAlgorithm parse_memory_algorithm(std::string_view label);
std::string_view to_string(MemoryAlgorithm algo);

struct VariableCounts {
  std::uint64_t image_sized = 0;
  std::uint64_t transform_sized = 0;
  std::uint64_t data_sized = 0;
  friend bool operator==(const VariableCounts&, const VariableCounts&) = default;
};

struct ProblemDims {
  std::uint64_t n = 0;  // image
  std::uint64_t N = 0;  // regularization transform output
  std::uint64_t m = 0;  // data
};

struct MemoryLedger {
  MemoryAlgorithm algorithm;
  VariableCounts counts;
  ProblemDims dims;
  std::uint64_t element_bytes = 4;

  std::uint64_t total_bytes() const;
  std::string report() const;
};

/// Per-algorithm counts of image-, transform- and data-sized arrays.
/// LALM is accounted for but not implemented.
MemoryLedger memory_ledger(MemoryAlgorithm algorithm, ProblemDims dims, std::uint64_t element_bytes = 4);

// ---------------------------------------------------------------------------
// Observers

struct ConvergenceRow {
  std::size_t k = 0;
  double cost = 0.0;
  double normalized_cost = 0.0;
  double rmsd = 0.0;
  double wall_seconds = 0.0;
};

class ConvergenceRecord {
 public:
  void add(const ConvergenceRow& row);
  const std::vector<ConvergenceRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }

 private:
  std::vector<ConvergenceRow> rows_;
};

/// Evaluates cost, normalized cost and RMSD against a reference after every iteration.
class MetricsRecorder final : public SolverObserver {
 public:
  MetricsRecorder(const ProblemSpec& problem, Vector x_ref, double cost_ref, RoiMask roi,
                  bool record_wall_time);

  void on_start(const SolverState& state) override;
  void on_iteration(const IterationInfo& info, const SolverState& state) override;

  const ConvergenceRecord& record() const noexcept { return record_; }

 private:
  void push(std::size_t k, const SolverState& state);

  const ProblemSpec& problem_;
  Vector x_ref_;
  double cost_ref_;
  RoiMask roi_;
  bool record_wall_time_;
  std::chrono::steady_clock::time_point start_;
  ConvergenceRecord record_;
};

class ShadowDualViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Test/debug observer that replays the per-block Frank-Wolfe recursion on the
/// full transform-space dual y and checks z = D^T y and ||y||_inf <= lambda
/// after every iteration. Allocates length-N storage on purpose.
class ShadowDualTracker final : public SolverObserver {
 public:
  explicit ShadowDualTracker(const ProblemSpec& problem, double z_tol = 1e-10,
                             double feas_rel_tol = 1e-12);

  void on_start(const SolverState& state) override;
  void on_iteration(const IterationInfo& info, const SolverState& state) override;

  const Vector& dual() const noexcept { return y_; }
  double max_z_mismatch() const noexcept { return max_z_mismatch_; }
  double max_dual_inf_norm() const noexcept { return max_dual_inf_; }
  std::size_t checks() const noexcept { return checks_; }

 private:
  void check(std::size_t k, const SolverState& state);

  const ProblemSpec& problem_;
  double z_tol_;
  double feas_rel_tol_;
  Vector y_;
  Vector x_bar_prev_;
  Vector dty_;
  double max_z_mismatch_ = 0.0;
  double max_dual_inf_ = 0.0;
  std::size_t checks_ = 0;
};

}  // namespace pdfw
