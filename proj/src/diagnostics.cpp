#include "pdfw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pdfw {

double cost_value(const ProblemSpec& problem, std::span<const double> x) {
  problem.validate();
  require_length(problem.image_len(), x.size(), "cost input");
  const Vector ax = apply_forward(*problem.A, x);
  double fit = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double r = ax[i] - problem.b[i];
    fit += problem.w[i] * r * r;
  }
  return 0.5 * fit + problem.lambda * reg_value(*problem.D, x);
}

double datafit_conjugate(const ProblemSpec& problem, std::span<const double> t) {
  require_length(problem.b.size(), t.size(), "conjugate argument");
  require_length(problem.b.size(), problem.w.size(), "conjugate weights");
  double shifted = 0.0;
  double base = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double wi = problem.w[i];
    if (!(wi > 0.0)) throw ContractViolation("datafit_conjugate: weights must be positive");
    const double u = t[i] + wi * problem.b[i];
    shifted += u * u / wi;
    base += wi * problem.b[i] * problem.b[i];
  }
  return 0.5 * shifted - 0.5 * base;
}

double normalized_cost(double cost_k, double cost_ref) {
  if (!(cost_ref > 0.0)) throw ContractViolation("normalized_cost: reference cost must be positive");
  return (cost_k - cost_ref) / cost_ref;
}

RoiMask inscribed_circle_roi(std::size_t nx, std::size_t ny) {
  RoiMask roi;
  const double radius = 0.5 * static_cast<double>(std::min(nx, ny));
  const double cx = 0.5 * static_cast<double>(nx);
  const double cy = 0.5 * static_cast<double>(ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double dx = static_cast<double>(ix) + 0.5 - cx;
      const double dy = static_cast<double>(iy) + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) roi.indices.push_back(iy * nx + ix);
    }
  }
  return roi;
}

double rmsd(std::span<const double> x, std::span<const double> x_ref, const RoiMask& roi) {
  require_length(x.size(), x_ref.size(), "rmsd reference");
  if (roi.indices.empty()) throw ContractViolation("rmsd: region of interest is empty");
  double acc = 0.0;
  for (std::size_t i : roi.indices) {
    if (i >= x.size()) throw ContractViolation("rmsd: ROI index out of range");
    const double d = x[i] - x_ref[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(roi.indices.size()));
}

// ---------------------------------------------------------------------------

MemoryAlgorithm parse_memory_algorithm(std::string_view label) {
  if (label == "LALM") return MemoryAlgorithm::LALM;
  if (label == "PDCP") return MemoryAlgorithm::PDCP;
  if (label == "PDFW_theta1") return MemoryAlgorithm::PDFW_theta1;
  if (label == "PDFW_theta0") return MemoryAlgorithm::PDFW_theta0;
  throw ContractViolation("unknown algorithm label '" + std::string(label) +
                          "' (expected LALM, PDCP, PDFW_theta1 or PDFW_theta0)");
}

std::string_view to_string(MemoryAlgorithm algo) {
  switch (algo) {
    case MemoryAlgorithm::LALM: return "LALM";
    case MemoryAlgorithm::PDCP: return "PDCP";
    case MemoryAlgorithm::PDFW_theta1: return "PDFW_theta1";
    case MemoryAlgorithm::PDFW_theta0: return "PDFW_theta0";
  }
  return "unknown";
}

std::uint64_t MemoryLedger::total_bytes() const {
  return element_bytes *
         (counts.image_sized * dims.n + counts.transform_sized * dims.N + counts.data_sized * dims.m);
}

std::string MemoryLedger::report() const {
  char buf[512];
  const double gb = static_cast<double>(total_bytes()) / 1e9;
  std::snprintf(buf, sizeof buf,
                "algorithm=%s\nimage_sized=%llu\ntransform_sized=%llu\ndata_sized=%llu\n"
                "n=%llu\nN=%llu\nm=%llu\nelement_bytes=%llu\ntotal_bytes=%llu\ntotal_gb=%.4f\n",
                std::string(to_string(algorithm)).c_str(),
                static_cast<unsigned long long>(counts.image_sized),
                static_cast<unsigned long long>(counts.transform_sized),
                static_cast<unsigned long long>(counts.data_sized),
                static_cast<unsigned long long>(dims.n), static_cast<unsigned long long>(dims.N),
                static_cast<unsigned long long>(dims.m),
                static_cast<unsigned long long>(element_bytes),
                static_cast<unsigned long long>(total_bytes()), gb);
  return std::string(buf) +
         "note=modeled bytes count state arrays only; published totals include further overhead\n";
}

MemoryLedger memory_ledger(MemoryAlgorithm algorithm, ProblemDims dims, std::uint64_t element_bytes) {
  if (dims.n == 0 || dims.N == 0 || dims.m == 0) {
    throw ContractViolation("memory_ledger: dimensions must be positive");
  }
  if (element_bytes == 0) throw ContractViolation("memory_ledger: element size must be positive");
  VariableCounts counts;
  switch (algorithm) {
    case MemoryAlgorithm::LALM: counts = {4, 2, 2}; break;
    case MemoryAlgorithm::PDCP: counts = {2, 1, 2}; break;
    case MemoryAlgorithm::PDFW_theta1: counts = {3, 0, 2}; break;
    case MemoryAlgorithm::PDFW_theta0: counts = {2, 0, 2}; break;
  }
  return {algorithm, counts, dims, element_bytes};
}

// ---------------------------------------------------------------------------

void ConvergenceRecord::add(const ConvergenceRow& row) {
  if (!rows_.empty() && row.k <= rows_.back().k) {
    throw ContractViolation("convergence rows must be strictly increasing in k");
  }
  rows_.push_back(row);
}

MetricsRecorder::MetricsRecorder(const ProblemSpec& problem, Vector x_ref, double cost_ref,
                                 RoiMask roi, bool record_wall_time)
    : problem_(problem),
      x_ref_(std::move(x_ref)),
      cost_ref_(cost_ref),
      roi_(std::move(roi)),
      record_wall_time_(record_wall_time) {
  require_length(problem.image_len(), x_ref_.size(), "reference image");
  if (!(cost_ref > 0.0)) throw ContractViolation("reference cost must be positive");
}

void MetricsRecorder::push(std::size_t k, const SolverState& state) {
  ConvergenceRow row;
  row.k = k;
  row.cost = cost_value(problem_, state.x);
  row.normalized_cost = normalized_cost(row.cost, cost_ref_);
  row.rmsd = rmsd(state.x, x_ref_, roi_);
  if (record_wall_time_) {
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  record_.add(row);
}

void MetricsRecorder::on_start(const SolverState& state) {
  start_ = std::chrono::steady_clock::now();
  push(state.k, state);
}

void MetricsRecorder::on_iteration(const IterationInfo&, const SolverState& state) {
  push(state.k, state);
}

// ---------------------------------------------------------------------------

ShadowDualTracker::ShadowDualTracker(const ProblemSpec& problem, double z_tol, double feas_rel_tol)
    : problem_(problem),
      z_tol_(z_tol),
      feas_rel_tol_(feas_rel_tol),
      y_(problem.D->total_len(), 0.0),
      dty_(problem.image_len(), 0.0) {}

void ShadowDualTracker::on_start(const SolverState& state) {
  std::fill(y_.begin(), y_.end(), 0.0);
  const auto xb = state.extrapolated();
  x_bar_prev_.assign(xb.begin(), xb.end());
  check(state.k, state);
}

void ShadowDualTracker::on_iteration(const IterationInfo& info, const SolverState& state) {
  const double alpha = info.steps.alpha;
  const double lam = problem_.lambda;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < problem_.D->num_blocks(); ++i) {
    const auto& blk = problem_.D->block(i);
    const Vector dx = apply_forward(blk, x_bar_prev_);
    for (std::size_t r = 0; r < dx.size(); ++r) {
      double& yi = y_[offset + r];
      yi = (1.0 - alpha) * yi + alpha * lam * sign_of(dx[r]);
    }
    offset += blk.range_len();
  }
  check(info.k + 1, state);
  const auto xb = state.extrapolated();
  x_bar_prev_.assign(xb.begin(), xb.end());
}

void ShadowDualTracker::check(std::size_t k, const SolverState& state) {
  std::fill(dty_.begin(), dty_.end(), 0.0);
  problem_.D->as_operator()->adjoint_add(y_, dty_);

  double worst = 0.0;
  std::size_t worst_at = 0;
  for (std::size_t j = 0; j < dty_.size(); ++j) {
    const double d = std::abs(state.z[j] - dty_[j]);
    if (d > worst) {
      worst = d;
      worst_at = j;
    }
  }
  double yinf = 0.0;
  std::size_t yinf_at = 0;
  for (std::size_t j = 0; j < y_.size(); ++j) {
    if (std::abs(y_[j]) > yinf) {
      yinf = std::abs(y_[j]);
      yinf_at = j;
    }
  }
  max_z_mismatch_ = std::max(max_z_mismatch_, worst);
  max_dual_inf_ = std::max(max_dual_inf_, yinf);
  ++checks_;

  if (!(worst <= z_tol_)) {
    throw ShadowDualViolation("shadow dual: |z - D^T y| = " + std::to_string(worst) +
                              " at pixel " + std::to_string(worst_at) + ", iteration " +
                              std::to_string(k));
  }
  if (!(yinf <= problem_.lambda * (1.0 + feas_rel_tol_))) {
    throw ShadowDualViolation("shadow dual: |y|_inf = " + std::to_string(yinf) + " exceeds lambda at row " +
                              std::to_string(yinf_at) + ", iteration " + std::to_string(k));
  }
}

}  // namespace pdfw
