#include "pdfw/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace pdfw {

void ProblemSpec::validate() const {
  if (!A) throw ContractViolation("problem: measurement operator is missing");
  if (!D) throw ContractViolation("problem: difference stack is missing");
  require_length(A->range_len(), b.size(), "problem data b");
  require_length(A->range_len(), w.size(), "problem weights w");
  require_length(A->domain_len(), D->image_len(), "difference stack image size");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ContractViolation("problem: lambda must be positive");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw ContractViolation("problem: operator norm estimate must be positive");
  }
  for (double wi : w) {
    if (!(wi > 0.0)) throw ContractViolation("problem: weights must be strictly positive");
  }
}

double estimate_lipschitz(const LinearOperatorHandle& A, std::span<const double> w,
                          const DiffStack& D, const NormOptions& options) {
  Vector root_w(w.size());
  std::transform(w.begin(), w.end(), root_w.begin(), [](double v) { return std::sqrt(v); });
  const auto K = stack({row_scaled(A, std::move(root_w)), D.as_operator()});
  const auto est = op_norm_estimate(*K, options.tol, options.max_iters, options.seed);
  return options.safety * est.value;
}

std::string_view to_string(SolverMode mode) {
  return mode == SolverMode::PDFW ? "PDFW" : "PDCP";
}

namespace {

void t_update_inplace(std::span<double> t, std::span<const double> x_bar, double sigma,
                      const ProblemSpec& p, std::span<double> ax) {
  std::fill(ax.begin(), ax.end(), 0.0);
  p.A->forward_add(x_bar, ax);
  const double keep = 1.0 / (1.0 + sigma);
  const double step = sigma / (1.0 + sigma);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = keep * t[i] + step * (p.w[i] * (ax[i] - p.b[i]));
  }
}

void z_update_inplace(std::span<double> z, std::span<const double> x_bar, double alpha,
                      const ProblemSpec& p, std::span<double> scratch) {
  if (alpha == 0.0) return;
  if (alpha == 1.0) {
    std::fill(z.begin(), z.end(), 0.0);
  } else {
    for (auto& v : z) v *= 1.0 - alpha;
  }
  fw_direction_add(*p.D, x_bar, alpha * p.lambda, z, scratch);
}

void x_update_inplace(std::span<double> x, std::span<const double> z, std::span<const double> t,
                      double tau, const ProblemSpec& p) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= tau * z[i];
  p.A->adjoint_add(t, x, -tau);
}

void pdcp_dual_inplace(std::span<double> s, std::span<double> z, std::span<const double> x_bar,
                       double sigma, const ProblemSpec& p) {
  const double lam = p.lambda;
  std::fill(z.begin(), z.end(), 0.0);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < p.D->num_blocks(); ++i) {
    const auto& blk = p.D->block(i);
    auto si = s.subspan(offset, blk.range_len());
    blk.forward_add(x_bar, si, sigma);
    for (auto& v : si) v = std::clamp(v, -lam, lam);
    blk.adjoint_add(si, z);
    offset += blk.range_len();
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

}  // namespace

Vector pdfw_t_update(std::span<const double> t, std::span<const double> x_bar, double sigma,
                     const ProblemSpec& problem) {
  if (!(sigma > 0.0)) throw ContractViolation("t-update: sigma must be positive");
  require_length(problem.data_len(), t.size(), "t-update dual");
  Vector out(t.begin(), t.end());
  Vector ax(problem.data_len());
  t_update_inplace(out, x_bar, sigma, problem, ax);
  return out;
}

Vector pdfw_z_update(std::span<const double> z, std::span<const double> x_bar, double alpha,
                     const ProblemSpec& problem) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("z-update: alpha must lie in [0, 1]");
  require_length(problem.image_len(), z.size(), "z-update aggregate");
  require_length(problem.image_len(), x_bar.size(), "z-update point");
  Vector out(z.begin(), z.end());
  Vector scratch(problem.D->max_block_len());
  z_update_inplace(out, x_bar, alpha, problem, scratch);
  return out;
}

Vector pdfw_x_update(std::span<const double> x, std::span<const double> z_new,
                     std::span<const double> t_new, double tau, const ProblemSpec& problem) {
  if (!(tau > 0.0)) throw ContractViolation("x-update: tau must be positive");
  require_length(problem.image_len(), x.size(), "x-update primal");
  require_length(problem.image_len(), z_new.size(), "x-update aggregate");
  Vector out(x.begin(), x.end());
  x_update_inplace(out, z_new, t_new, tau, problem);
  return out;
}

Vector over_relax(std::span<const double> x_new, std::span<const double> x_old, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ContractViolation("over_relax: theta must lie in [0, 1]");
  require_length(x_new.size(), x_old.size(), "over_relax previous iterate");
  Vector out(x_new.begin(), x_new.end());
  if (theta == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x_new[i] + theta * (x_new[i] - x_old[i]);
  return out;
}

PdcpDualUpdate pdcp_z_update(std::span<const double> s, std::span<const double> x_bar, double sigma,
                             const ProblemSpec& problem) {
  if (!(sigma > 0.0)) throw ContractViolation("PDCP dual update: sigma must be positive");
  require_length(problem.D->total_len(), s.size(), "PDCP transform dual");
  require_length(problem.image_len(), x_bar.size(), "PDCP point");
  PdcpDualUpdate out{Vector(s.begin(), s.end()), Vector(problem.image_len(), 0.0)};
  pdcp_dual_inplace(out.s_new, out.z_new, x_bar, sigma, problem);
  return out;
}

SolverResult run_solver(const ProblemSpec& problem, SolverMode mode, const StepSchedule& schedule,
                        std::size_t k_max, std::span<const double> x0, SolverObserver* observer) {
  problem.validate();
  require_length(problem.image_len(), x0.size(), "initial image");

  const std::size_t n = problem.image_len();
  const std::size_t m = problem.data_len();
  const double theta = schedule.theta();

  SolverResult result;
  auto& ledger = result.ledger;
  auto& st = result.state;

  st.x = ledger.allocate("x", BufferSpace::Image, n, true);
  std::copy(x0.begin(), x0.end(), st.x.begin());
  if (theta != 0.0) {
    st.x_bar = ledger.allocate("x_bar", BufferSpace::Image, n, true);
    std::copy(x0.begin(), x0.end(), st.x_bar.begin());
  }
  st.z = ledger.allocate("z", BufferSpace::Image, n, true);
  st.t = ledger.allocate("t", BufferSpace::Data, m, true);
  Vector ax = ledger.allocate("A x_bar", BufferSpace::Data, m, false);
  Vector fw_scratch;
  if (mode == SolverMode::PDFW) {
    fw_scratch = ledger.allocate("block sign scratch", BufferSpace::Transform,
                                 problem.D->max_block_len(), false);
  } else {
    st.s = ledger.allocate("s", BufferSpace::Transform, problem.D->total_len(), true);
  }

  if (mode == SolverMode::PDCP && schedule.constant_primal_dual_steps()) {
    const auto s0 = schedule.eval(0, problem.lipschitz);
    const double prod = s0.tau * s0.sigma * problem.lipschitz * problem.lipschitz;
    // L already carries the safety factor, so tau = sigma = 1/L lands exactly on 1.
    if (prod > 1.0 + 1e-12) {
      result.warnings.push_back("PDCP step condition tau*sigma*L^2 < 1 violated (value " +
                                std::to_string(prod) + ")");
    }
  }

  result.log.reserve(k_max);
  if (observer) observer->on_start(st);

  for (std::size_t k = 0; k < k_max; ++k) {
    const StepSizes steps = schedule.eval(k, problem.lipschitz);
    const std::span<const double> xb = st.extrapolated();

    t_update_inplace(st.t, xb, steps.sigma, problem, ax);
    if (mode == SolverMode::PDFW) {
      z_update_inplace(st.z, xb, steps.alpha, problem, fw_scratch);
    } else {
      pdcp_dual_inplace(st.s, st.z, xb, steps.sigma, problem);
    }

    if (theta != 0.0) {
      // x_bar now only needs to remember x^(k) for the extrapolation.
      std::copy(st.x.begin(), st.x.end(), st.x_bar.begin());
      x_update_inplace(st.x, st.z, st.t, steps.tau, problem);
      for (std::size_t i = 0; i < n; ++i) st.x_bar[i] = st.x[i] + theta * (st.x[i] - st.x_bar[i]);
    } else {
      x_update_inplace(st.x, st.z, st.t, steps.tau, problem);
    }
    st.k = k + 1;

    if (!all_finite(st.x) || !all_finite(st.x_bar) || !all_finite(st.z) || !all_finite(st.t) ||
        !all_finite(st.s)) {
      throw DivergenceError(k, "solver diverged: non-finite state at iteration " + std::to_string(k));
    }

    result.log.push_back({k, steps});
    if (observer) observer->on_iteration(result.log.back(), st);
  }
  return result;
}

}  // namespace pdfw
