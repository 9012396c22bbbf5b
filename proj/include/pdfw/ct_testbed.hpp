#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdfw/linops.hpp"

namespace pdfw {

/// 2D image on a square-pixel grid centred at the origin. Row-major storage:
/// pixel (ix, iy) lives at iy * nx + ix, with y increasing with iy.
struct ImageGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double spacing = 1.0;
  Vector values;

  ImageGrid() = default;
  ImageGrid(std::size_t nx_, std::size_t ny_, double spacing_);
  ImageGrid(std::size_t nx_, std::size_t ny_, double spacing_, Vector values_);

  std::size_t size() const noexcept { return values.size(); }
  /// Throws ContractViolation when the invariants (length, finiteness, spacing) fail.
  void validate() const;
};

struct ScanGeometry {
  std::size_t num_views = 0;
  std::size_t num_detectors = 0;
  Vector angles;  // radians, ascending in [0, pi)
  double detector_spacing = 1.0;

  std::size_t num_measurements() const noexcept { return num_views * num_detectors; }
  /// Signed distance of detector `j` from the rotation centre.
  double detector_offset(std::size_t j) const noexcept;
  void validate() const;
};

/// `num_views` equally spaced angles k*pi/num_views.
ScanGeometry make_uniform_geometry(std::size_t num_views, std::size_t num_detectors,
                                   double detector_spacing);

/// Non-fatal remarks about a geometry/grid pairing (e.g. more measurements than pixels).
std::vector<std::string> geometry_warnings(const ScanGeometry& geometry, const ImageGrid& image);

struct SinogramData {
  ScanGeometry geometry;
  Vector b;
  Vector w;

  void validate() const;
};

/// Ellipse in normalized coordinates: the grid spans [-1, 1] along each axis.
struct Ellipse {
  double center_x = 0.0;
  double center_y = 0.0;
  double axis_x = 1.0;
  double axis_y = 1.0;
  double rotation = 0.0;  // radians, counter-clockwise
  double intensity = 1.0;
};

using PhantomSpec = std::vector<Ellipse>;

/// Each pixel value is the sum of intensities of the ellipses containing its centre.
ImageGrid make_phantom(std::size_t nx, std::size_t ny, double spacing, const PhantomSpec& spec);

/// Parallel-beam projector using exact ray/pixel intersection lengths (Siddon).
/// The ray coefficients are traced once at construction; the adjoint is the
/// exact transpose of the same table.
class ParallelBeamProjector final : public LinearOperator {
 public:
  struct RayEntry {
    std::uint32_t pixel;
    double length;
  };

  ParallelBeamProjector(ScanGeometry geometry, std::size_t nx, std::size_t ny, double spacing);

  const ScanGeometry& geometry() const noexcept { return geometry_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double spacing() const noexcept { return spacing_; }

  /// Nonzero coefficients of measurement row `ray` (view-major: view * num_detectors + detector).
  std::span<const RayEntry> ray(std::size_t index) const;
  std::size_t nonzeros() const noexcept { return entries_.size(); }

 protected:
  void do_forward_add(std::span<const double> x, std::span<double> out, double scale) const override;
  void do_adjoint_add(std::span<const double> y, std::span<double> out, double scale) const override;

 private:
  ScanGeometry geometry_;
  std::size_t nx_;
  std::size_t ny_;
  double spacing_;
  std::vector<std::size_t> row_start_;
  std::vector<RayEntry> entries_;
};

/// Siddon traversal of one line {p : p . (cos a, sin a) = offset} through the grid.
/// Rays that miss the grid return an empty list.
std::vector<ParallelBeamProjector::RayEntry> trace_ray(double angle, double offset, std::size_t nx,
                                                       std::size_t ny, double spacing);

std::shared_ptr<const ParallelBeamProjector> make_projector(const ScanGeometry& geometry,
                                                            const ImageGrid& grid);

Vector project(const ScanGeometry& geometry, const ImageGrid& image);
Vector backproject(const ScanGeometry& geometry, const ImageGrid& grid_shape,
                   std::span<const double> sino_values);

enum class Weighting { Uniform, InverseVariance };

/// b = project(phantom) + N(0, noise_std^2) from a seeded generator.
SinogramData simulate_data(const ImageGrid& phantom, const ScanGeometry& geometry,
                           double noise_std, std::uint64_t seed, Weighting weighting);

/// Same, reusing an already-built projector for `phantom`'s grid.
SinogramData simulate_data(const ImageGrid& phantom, const ParallelBeamProjector& projector,
                           double noise_std, std::uint64_t seed, Weighting weighting);

}  // namespace pdfw
