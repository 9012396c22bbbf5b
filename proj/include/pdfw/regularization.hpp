#pragma once

#include <utility>
#include <vector>

#include "pdfw/linops.hpp"

namespace pdfw {

struct PixelOffset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const PixelOffset&, const PixelOffset&) = default;
};

/// One directional finite difference: row p holds x[p + offset] - x[p] for
/// every base pixel p whose neighbour lies inside the grid. Rows are ordered
/// by base pixel, row-major.
class DiffBlockOperator final : public LinearOperator {
 public:
  DiffBlockOperator(std::size_t nx, std::size_t ny, PixelOffset offset);

  PixelOffset offset() const noexcept { return offset_; }

  /// out[r] = x[nbr(r)] - x[base(r)], overwriting `out`.
  void difference(std::span<const double> x, std::span<double> out) const;

  /// Base pixel index of row `r` and the neighbour it is differenced against.
  std::pair<std::size_t, std::size_t> row_pixels(std::size_t r) const;

 protected:
  void do_forward_add(std::span<const double> x, std::span<double> out, double scale) const override;
  void do_adjoint_add(std::span<const double> y, std::span<double> out, double scale) const override;

 private:
  template <typename Fn>
  void for_each_row(Fn&& fn) const;

  std::size_t nx_;
  PixelOffset offset_;
  std::size_t ix_begin_, ix_end_, iy_begin_, iy_end_;
};

/// Stacked transform D = [D_1; ...; D_l] with "omit" boundary handling.
class DiffStack {
 public:
  DiffStack(std::size_t nx, std::size_t ny, std::vector<PixelOffset> offsets);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t image_len() const noexcept { return nx_ * ny_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  const DiffBlockOperator& block(std::size_t i) const;
  LinearOperatorHandle block_handle(std::size_t i) const;
  std::size_t block_len(std::size_t i) const { return block(i).range_len(); }
  /// N = sum of block lengths.
  std::size_t total_len() const noexcept { return total_len_; }
  std::size_t max_block_len() const noexcept { return max_block_len_; }
  const std::vector<PixelOffset>& offsets() const noexcept { return offsets_; }

  /// The full stack as one operator (materializes length-N outputs; not for the PDFW loop).
  LinearOperatorHandle as_operator() const;

 private:
  std::size_t nx_;
  std::size_t ny_;
  std::vector<PixelOffset> offsets_;
  std::vector<std::shared_ptr<const DiffBlockOperator>> blocks_;
  std::size_t total_len_ = 0;
  std::size_t max_block_len_ = 0;
};

/// The half-neighbourhood used by the CT testbed: {(1,0), (0,1), (1,1), (1,-1)}.
std::vector<PixelOffset> default_offsets_2d();

Vector diff_forward(const DiffStack& stack, std::size_t block, std::span<const double> x);
Vector diff_adjoint(const DiffStack& stack, std::size_t block, std::span<const double> y);

/// Entrywise sign with sign(0) = sign(-0) = 0.
inline double sign_of(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
Vector sign_map(std::span<const double> v);

/// out += scale * sum_i D_i^T sign(D_i x), block by block in order 1..l.
/// `scratch` must hold at least max_block_len() entries; nothing longer is used.
void fw_direction_add(const DiffStack& stack, std::span<const double> x, double scale,
                      std::span<double> out, std::span<double> scratch);

/// lambda * sum_i D_i^T sign(D_i x), the Frank-Wolfe vertex mapped back to image space.
Vector fw_direction_accumulate(const DiffStack& stack, std::span<const double> x, double lambda);

/// ||D x||_1, accumulated blockwise without storing D x.
double reg_value(const DiffStack& stack, std::span<const double> x);

}  // namespace pdfw
