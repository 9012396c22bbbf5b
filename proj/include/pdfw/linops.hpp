#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "pdfw/errors.hpp"

namespace pdfw {

using Vector = std::vector<double>;

enum class OperatorKind { DenseMatrix, Projector, DiffBlock, Stacked, RowScaled, Identity };

std::string_view to_string(OperatorKind kind);

/// Matrix-free linear map R^domain -> R^range.
///
/// Implementations are immutable after construction. The `*_add` entry points
/// accumulate `out += scale * op(in)` and must not allocate; they are what the
/// solvers use to update state in place.
class LinearOperator {
 public:
  LinearOperator(std::size_t domain_len, std::size_t range_len, OperatorKind kind);
  virtual ~LinearOperator() = default;

  LinearOperator(const LinearOperator&) = delete;
  LinearOperator& operator=(const LinearOperator&) = delete;

  std::size_t domain_len() const noexcept { return domain_len_; }
  std::size_t range_len() const noexcept { return range_len_; }
  OperatorKind kind() const noexcept { return kind_; }

  /// out += scale * op(x)
  void forward_add(std::span<const double> x, std::span<double> out, double scale = 1.0) const;
  /// out += scale * op^T(y)
  void adjoint_add(std::span<const double> y, std::span<double> out, double scale = 1.0) const;

 protected:
  virtual void do_forward_add(std::span<const double> x, std::span<double> out,
                              double scale) const = 0;
  virtual void do_adjoint_add(std::span<const double> y, std::span<double> out,
                              double scale) const = 0;

 private:
  std::size_t domain_len_;
  std::size_t range_len_;
  OperatorKind kind_;
};

using LinearOperatorHandle = std::shared_ptr<const LinearOperator>;

Vector apply_forward(const LinearOperator& op, std::span<const double> x);
Vector apply_adjoint(const LinearOperator& op, std::span<const double> y);

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(std::size_t n);

 protected:
  void do_forward_add(std::span<const double> x, std::span<double> out, double scale) const override;
  void do_adjoint_add(std::span<const double> y, std::span<double> out, double scale) const override;
};

/// Row-major dense matrix.
class DenseMatrixOperator final : public LinearOperator {
 public:
  DenseMatrixOperator(std::size_t rows, std::size_t cols, Vector values);

  double at(std::size_t r, std::size_t c) const { return values_[r * domain_len() + c]; }

 protected:
  void do_forward_add(std::span<const double> x, std::span<double> out, double scale) const override;
  void do_adjoint_add(std::span<const double> y, std::span<double> out, double scale) const override;

 private:
  Vector values_;
};

/// Vertical concatenation [op_1; op_2; ...] over a shared domain.
class StackedOperator final : public LinearOperator {
 public:
  explicit StackedOperator(std::vector<LinearOperatorHandle> ops);

  std::span<const LinearOperatorHandle> blocks() const noexcept { return ops_; }

 protected:
  void do_forward_add(std::span<const double> x, std::span<double> out, double scale) const override;
  void do_adjoint_add(std::span<const double> y, std::span<double> out, double scale) const override;

 private:
  std::vector<LinearOperatorHandle> ops_;
};

/// diag(row_scale) * op
class RowScaledOperator final : public LinearOperator {
 public:
  RowScaledOperator(LinearOperatorHandle op, Vector row_scale);

 protected:
  void do_forward_add(std::span<const double> x, std::span<double> out, double scale) const override;
  void do_adjoint_add(std::span<const double> y, std::span<double> out, double scale) const override;

 private:
  LinearOperatorHandle op_;
  Vector row_scale_;
};

LinearOperatorHandle make_identity(std::size_t n);
LinearOperatorHandle make_dense(std::size_t rows, std::size_t cols, Vector row_major_values);
LinearOperatorHandle stack(std::vector<LinearOperatorHandle> ops);
LinearOperatorHandle row_scaled(LinearOperatorHandle op, Vector row_scale);

struct NormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Spectral norm by power iteration on op^T op from a seeded Gaussian start.
/// Stops once successive sqrt-Rayleigh-quotient estimates agree to `tol`
/// relative; otherwise returns the last estimate with `converged = false`.
NormEstimate op_norm_estimate(const LinearOperator& op, double tol, std::size_t max_iters,
                              std::uint64_t seed);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace pdfw
