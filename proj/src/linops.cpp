#include "pdfw/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace pdfw {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::DenseMatrix: return "dense-matrix";
    case OperatorKind::Projector: return "projector";
    case OperatorKind::DiffBlock: return "diff-block";
    case OperatorKind::Stacked: return "stacked";
    case OperatorKind::RowScaled: return "row-scaled";
    case OperatorKind::Identity: return "identity";
  }
  return "unknown";
}

LinearOperator::LinearOperator(std::size_t domain_len, std::size_t range_len, OperatorKind kind)
    : domain_len_(domain_len), range_len_(range_len), kind_(kind) {
  if (domain_len == 0 || range_len == 0) {
    throw ContractViolation("linear operator dimensions must be positive");
  }
}

void LinearOperator::forward_add(std::span<const double> x, std::span<double> out,
                                 double scale) const {
  require_length(domain_len_, x.size(), "forward input");
  require_length(range_len_, out.size(), "forward output");
  do_forward_add(x, out, scale);
}

void LinearOperator::adjoint_add(std::span<const double> y, std::span<double> out,
                                 double scale) const {
  require_length(range_len_, y.size(), "adjoint input");
  require_length(domain_len_, out.size(), "adjoint output");
  do_adjoint_add(y, out, scale);
}

Vector apply_forward(const LinearOperator& op, std::span<const double> x) {
  Vector out(op.range_len(), 0.0);
  op.forward_add(x, out);
  return out;
}

Vector apply_adjoint(const LinearOperator& op, std::span<const double> y) {
  Vector out(op.domain_len(), 0.0);
  op.adjoint_add(y, out);
  return out;
}

// ---------------------------------------------------------------------------

IdentityOperator::IdentityOperator(std::size_t n) : LinearOperator(n, n, OperatorKind::Identity) {}

void IdentityOperator::do_forward_add(std::span<const double> x, std::span<double> out,
                                      double scale) const {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += scale * x[i];
}

void IdentityOperator::do_adjoint_add(std::span<const double> y, std::span<double> out,
                                      double scale) const {
  do_forward_add(y, out, scale);
}

// ---------------------------------------------------------------------------

DenseMatrixOperator::DenseMatrixOperator(std::size_t rows, std::size_t cols, Vector values)
    : LinearOperator(cols, rows, OperatorKind::DenseMatrix), values_(std::move(values)) {
  require_length(rows * cols, values_.size(), "dense matrix values");
}

void DenseMatrixOperator::do_forward_add(std::span<const double> x, std::span<double> out,
                                         double scale) const {
  const std::size_t cols = domain_len();
  for (std::size_t r = 0; r < range_len(); ++r) {
    double acc = 0.0;
    const double* row = values_.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] += scale * acc;
  }
}

void DenseMatrixOperator::do_adjoint_add(std::span<const double> y, std::span<double> out,
                                         double scale) const {
  const std::size_t cols = domain_len();
  for (std::size_t r = 0; r < range_len(); ++r) {
    const double yr = scale * y[r];
    const double* row = values_.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c] * yr;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::size_t total_range(const std::vector<LinearOperatorHandle>& ops) {
  if (ops.empty()) throw ContractViolation("stack: operator list is empty");
  std::size_t total = 0;
  for (const auto& op : ops) {
    if (!op) throw ContractViolation("stack: null operator");
    if (op->domain_len() != ops.front()->domain_len()) {
      throw ContractViolation("stack: mismatched domain lengths (" +
                              std::to_string(ops.front()->domain_len()) + " vs " +
                              std::to_string(op->domain_len()) + ")");
    }
    total += op->range_len();
  }
  return total;
}

}  // namespace

StackedOperator::StackedOperator(std::vector<LinearOperatorHandle> ops)
    : LinearOperator(ops.empty() || !ops.front() ? 0 : ops.front()->domain_len(), total_range(ops),
                     OperatorKind::Stacked),
      ops_(std::move(ops)) {}

void StackedOperator::do_forward_add(std::span<const double> x, std::span<double> out,
                                     double scale) const {
  std::size_t offset = 0;
  for (const auto& op : ops_) {
    op->forward_add(x, out.subspan(offset, op->range_len()), scale);
    offset += op->range_len();
  }
}

void StackedOperator::do_adjoint_add(std::span<const double> y, std::span<double> out,
                                     double scale) const {
  std::size_t offset = 0;
  for (const auto& op : ops_) {
    op->adjoint_add(y.subspan(offset, op->range_len()), out, scale);
    offset += op->range_len();
  }
}

// ---------------------------------------------------------------------------

RowScaledOperator::RowScaledOperator(LinearOperatorHandle op, Vector row_scale)
    : LinearOperator(op ? op->domain_len() : 0, op ? op->range_len() : 0, OperatorKind::RowScaled),
      op_(std::move(op)),
      row_scale_(std::move(row_scale)) {
  require_length(range_len(), row_scale_.size(), "row scale");
}

void RowScaledOperator::do_forward_add(std::span<const double> x, std::span<double> out,
                                       double scale) const {
  Vector tmp(range_len(), 0.0);
  op_->forward_add(x, tmp, scale);
  for (std::size_t i = 0; i < tmp.size(); ++i) out[i] += row_scale_[i] * tmp[i];
}

void RowScaledOperator::do_adjoint_add(std::span<const double> y, std::span<double> out,
                                       double scale) const {
  Vector tmp(range_len());
  for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = row_scale_[i] * y[i];
  op_->adjoint_add(tmp, out, scale);
}

// ---------------------------------------------------------------------------

LinearOperatorHandle make_identity(std::size_t n) { return std::make_shared<IdentityOperator>(n); }

LinearOperatorHandle make_dense(std::size_t rows, std::size_t cols, Vector row_major_values) {
  return std::make_shared<DenseMatrixOperator>(rows, cols, std::move(row_major_values));
}

LinearOperatorHandle stack(std::vector<LinearOperatorHandle> ops) {
  return std::make_shared<StackedOperator>(std::move(ops));
}

LinearOperatorHandle row_scaled(LinearOperatorHandle op, Vector row_scale) {
  return std::make_shared<RowScaledOperator>(std::move(op), std::move(row_scale));
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_length(a.size(), b.size(), "dot operand");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

NormEstimate op_norm_estimate(const LinearOperator& op, double tol, std::size_t max_iters,
                              std::uint64_t seed) {
  if (!(tol > 0.0)) throw ContractViolation("op_norm_estimate: tol must be positive");
  if (max_iters == 0) throw ContractViolation("op_norm_estimate: max_iters must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(op.domain_len());
  for (auto& e : v) e = gauss(rng);

  Vector image(op.range_len());
  Vector back(op.domain_len());
  NormEstimate est;
  double previous = -1.0;

  double vnorm = norm2(v);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (auto& e : v) e /= vnorm;
    std::fill(image.begin(), image.end(), 0.0);
    op.forward_add(v, image);
    std::fill(back.begin(), back.end(), 0.0);
    op.adjoint_add(image, back);

    // Rayleigh quotient of op^T op at unit v equals ||op v||^2.
    const double current = norm2(image);
    est.value = current;
    est.iterations = it;
    if (current == 0.0) {
      est.converged = true;
      return est;
    }
    if (previous > 0.0 && std::abs(current - previous) < tol * current) {
      est.converged = true;
      return est;
    }
    previous = current;
    vnorm = norm2(back);
    v.swap(back);
  }
  return est;
}

}  // namespace pdfw
