#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pdfw/linops.hpp"
#include "pdfw/regularization.hpp"
#include "pdfw/schedule.hpp"
#include "pdfw/workspace.hpp"

namespace pdfw {

/// min_x 1/2 ||A x - b||_W^2 + lambda ||D x||_1 together with the norm bound L
/// used by the step-size schedules.
struct ProblemSpec {
  LinearOperatorHandle A;
  Vector b;
  Vector w;  // diagonal of W, strictly positive
  std::shared_ptr<const DiffStack> D;
  double lambda = 1.0;
  double lipschitz = 1.0;

  std::size_t image_len() const { return A->domain_len(); }
  std::size_t data_len() const { return A->range_len(); }
  void validate() const;
};

struct NormOptions {
  double tol = 1e-8;
  std::size_t max_iters = 2000;
  std::uint64_t seed = 0;
  double safety = 1.01;
};

/// safety * ||[sqrt(W) A; D]||_2 estimated by power iteration.
double estimate_lipschitz(const LinearOperatorHandle& A, std::span<const double> w,
                          const DiffStack& D, const NormOptions& options = {});

enum class SolverMode { PDFW, PDCP };

std::string_view to_string(SolverMode mode);

/// Live memory of the iteration. `x_bar` is empty when theta = 0 (x itself is
/// the extrapolated point); `s` is the transform-space dual and is only
/// allocated in PDCP mode.
struct SolverState {
  Vector x;
  Vector x_bar;
  Vector z;
  Vector t;
  Vector s;
  std::size_t k = 0;

  std::span<const double> extrapolated() const noexcept {
    return x_bar.empty() ? std::span<const double>(x) : std::span<const double>(x_bar);
  }
};

// Single-step updates. Each returns a fresh vector and leaves its inputs untouched.

/// t/(1+sigma) + sigma/(1+sigma) * W (A x_bar - b)
Vector pdfw_t_update(std::span<const double> t, std::span<const double> x_bar, double sigma,
                     const ProblemSpec& problem);
/// (1-alpha) z + alpha * lambda * sum_i D_i^T sign(D_i x_bar), block by block.
Vector pdfw_z_update(std::span<const double> z, std::span<const double> x_bar, double alpha,
                     const ProblemSpec& problem);
/// x - tau (z_new + A^T t_new)
Vector pdfw_x_update(std::span<const double> x, std::span<const double> z_new,
                     std::span<const double> t_new, double tau, const ProblemSpec& problem);
/// x_new + theta (x_new - x_old)
Vector over_relax(std::span<const double> x_new, std::span<const double> x_old, double theta);

struct PdcpDualUpdate {
  Vector s_new;
  Vector z_new;
};
/// s_new = clamp(s + sigma D x_bar, [-lambda, lambda]), z_new = D^T s_new.
PdcpDualUpdate pdcp_z_update(std::span<const double> s, std::span<const double> x_bar, double sigma,
                             const ProblemSpec& problem);

struct IterationInfo {
  std::size_t k = 0;  // index of the iteration just completed (state now holds k+1)
  StepSizes steps;
};

class SolverObserver {
 public:
  virtual ~SolverObserver() = default;
  virtual void on_start(const SolverState& /*state*/) {}
  virtual void on_iteration(const IterationInfo& info, const SolverState& state) = 0;
};

struct SolverResult {
  SolverState state;
  std::vector<IterationInfo> log;
  std::vector<std::string> warnings;
  AllocationLedger ledger;
};

/// Runs k_max iterations of the primal-dual loop in the order t, z, x, x_bar.
/// PDFW mode keeps only image- and data-sized state; PDCP mode swaps the
/// z-update for the projected transform-space dual step.
/// Throws DivergenceError when any state entry becomes non-finite.
SolverResult run_solver(const ProblemSpec& problem, SolverMode mode, const StepSchedule& schedule,
                        std::size_t k_max, std::span<const double> x0,
                        SolverObserver* observer = nullptr);

}  // namespace pdfw
