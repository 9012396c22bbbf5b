#include "pdfw/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace pdfw {

namespace {

std::size_t valid_rows(std::size_t nx, std::size_t ny, PixelOffset o) {
  const auto ax = static_cast<std::size_t>(std::abs(o.dx));
  const auto ay = static_cast<std::size_t>(std::abs(o.dy));
  if (ax >= nx || ay >= ny) return 0;
  return (nx - ax) * (ny - ay);
}

std::size_t checked_rows(std::size_t nx, std::size_t ny, PixelOffset o) {
  if (o.dx == 0 && o.dy == 0) throw ContractViolation("difference offset (0,0) is not allowed");
  const std::size_t rows = valid_rows(nx, ny, o);
  if (rows == 0) {
    throw ContractViolation("difference offset (" + std::to_string(o.dx) + "," +
                            std::to_string(o.dy) + ") leaves no pixel pair inside the grid");
  }
  return rows;
}

}  // namespace

DiffBlockOperator::DiffBlockOperator(std::size_t nx, std::size_t ny, PixelOffset offset)
    : LinearOperator(nx * ny, checked_rows(nx, ny, offset), OperatorKind::DiffBlock),
      nx_(nx),
      offset_(offset) {
  const auto ax = static_cast<std::size_t>(std::abs(offset.dx));
  const auto ay = static_cast<std::size_t>(std::abs(offset.dy));
  ix_begin_ = offset.dx < 0 ? ax : 0;
  ix_end_ = offset.dx < 0 ? nx : nx - ax;
  iy_begin_ = offset.dy < 0 ? ay : 0;
  iy_end_ = offset.dy < 0 ? ny : ny - ay;
}

template <typename Fn>
void DiffBlockOperator::for_each_row(Fn&& fn) const {
  const std::ptrdiff_t shift =
      static_cast<std::ptrdiff_t>(offset_.dy) * static_cast<std::ptrdiff_t>(nx_) + offset_.dx;
  std::size_t r = 0;
  for (std::size_t iy = iy_begin_; iy < iy_end_; ++iy) {
    for (std::size_t ix = ix_begin_; ix < ix_end_; ++ix, ++r) {
      const std::size_t base = iy * nx_ + ix;
      fn(r, base, static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) + shift));
    }
  }
}

std::pair<std::size_t, std::size_t> DiffBlockOperator::row_pixels(std::size_t r) const {
  if (r >= range_len()) throw ContractViolation("difference row out of range");
  const std::size_t width = ix_end_ - ix_begin_;
  const std::size_t ix = ix_begin_ + r % width;
  const std::size_t iy = iy_begin_ + r / width;
  const std::size_t base = iy * nx_ + ix;
  const auto nbr = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) +
                                            offset_.dy * static_cast<std::ptrdiff_t>(nx_) +
                                            offset_.dx);
  return {base, nbr};
}

void DiffBlockOperator::difference(std::span<const double> x, std::span<double> out) const {
  require_length(domain_len(), x.size(), "difference input");
  require_length(range_len(), out.size(), "difference output");
  for_each_row([&](std::size_t r, std::size_t base, std::size_t nbr) { out[r] = x[nbr] - x[base]; });
}

void DiffBlockOperator::do_forward_add(std::span<const double> x, std::span<double> out,
                                       double scale) const {
  for_each_row(
      [&](std::size_t r, std::size_t base, std::size_t nbr) { out[r] += scale * (x[nbr] - x[base]); });
}

void DiffBlockOperator::do_adjoint_add(std::span<const double> y, std::span<double> out,
                                       double scale) const {
  for_each_row([&](std::size_t r, std::size_t base, std::size_t nbr) {
    const double v = scale * y[r];
    out[nbr] += v;
    out[base] -= v;
  });
}

// ---------------------------------------------------------------------------

DiffStack::DiffStack(std::size_t nx, std::size_t ny, std::vector<PixelOffset> offsets)
    : nx_(nx), ny_(ny), offsets_(std::move(offsets)) {
  if (nx == 0 || ny == 0) throw ContractViolation("difference grid dimensions must be positive");
  if (offsets_.empty()) throw ContractViolation("difference stack needs at least one offset");
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (offsets_[i] == offsets_[j]) throw ContractViolation("duplicate difference offset");
    }
    auto blk = std::make_shared<DiffBlockOperator>(nx, ny, offsets_[i]);
    total_len_ += blk->range_len();
    max_block_len_ = std::max(max_block_len_, blk->range_len());
    blocks_.push_back(std::move(blk));
  }
}

const DiffBlockOperator& DiffStack::block(std::size_t i) const {
  if (i >= blocks_.size()) {
    throw ContractViolation("block index " + std::to_string(i) + " out of range (stack has " +
                            std::to_string(blocks_.size()) + " blocks)");
  }
  return *blocks_[i];
}

LinearOperatorHandle DiffStack::block_handle(std::size_t i) const {
  block(i);
  return blocks_[i];
}

LinearOperatorHandle DiffStack::as_operator() const {
  std::vector<LinearOperatorHandle> ops(blocks_.begin(), blocks_.end());
  return stack(std::move(ops));
}

std::vector<PixelOffset> default_offsets_2d() { return {{1, 0}, {0, 1}, {1, 1}, {1, -1}}; }

Vector diff_forward(const DiffStack& stack, std::size_t block, std::span<const double> x) {
  return apply_forward(stack.block(block), x);
}

Vector diff_adjoint(const DiffStack& stack, std::size_t block, std::span<const double> y) {
  return apply_adjoint(stack.block(block), y);
}

Vector sign_map(std::span<const double> v) {
  Vector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), sign_of);
  return out;
}

void fw_direction_add(const DiffStack& stack, std::span<const double> x, double scale,
                      std::span<double> out, std::span<double> scratch) {
  if (scratch.size() < stack.max_block_len()) {
    throw ContractViolation("fw_direction_add: scratch shorter than the largest block");
  }
  for (std::size_t i = 0; i < stack.num_blocks(); ++i) {
    const auto& blk = stack.block(i);
    auto buf = scratch.first(blk.range_len());
    blk.difference(x, buf);
    for (auto& v : buf) v = sign_of(v);
    blk.adjoint_add(buf, out, scale);
  }
}

Vector fw_direction_accumulate(const DiffStack& stack, std::span<const double> x, double lambda) {
  if (!(lambda > 0.0)) throw ContractViolation("lambda must be positive");
  Vector out(stack.image_len(), 0.0);
  Vector scratch(stack.max_block_len());
  fw_direction_add(stack, x, lambda, out, scratch);
  return out;
}

double reg_value(const DiffStack& stack, std::span<const double> x) {
  require_length(stack.image_len(), x.size(), "reg_value input");
  double total = 0.0;
  for (std::size_t i = 0; i < stack.num_blocks(); ++i) {
    const auto& blk = stack.block(i);
    for (std::size_t r = 0; r < blk.range_len(); ++r) {
      const auto [base, nbr] = blk.row_pixels(r);
      total += std::abs(x[nbr] - x[base]);
    }
  }
  return total;
}

}  // namespace pdfw
