#include "pdfw/ct_testbed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace pdfw {

ImageGrid::ImageGrid(std::size_t nx_, std::size_t ny_, double spacing_)
    : nx(nx_), ny(ny_), spacing(spacing_), values(nx_ * ny_, 0.0) {}

ImageGrid::ImageGrid(std::size_t nx_, std::size_t ny_, double spacing_, Vector values_)
    : nx(nx_), ny(ny_), spacing(spacing_), values(std::move(values_)) {
  validate();
}

void ImageGrid::validate() const {
  if (nx == 0 || ny == 0) throw ContractViolation("image grid dimensions must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw ContractViolation("image spacing must be positive and finite");
  }
  require_length(nx * ny, values.size(), "image values");
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractViolation("image contains a non-finite value");
  }
}

double ScanGeometry::detector_offset(std::size_t j) const noexcept {
  return (static_cast<double>(j) - 0.5 * static_cast<double>(num_detectors - 1)) * detector_spacing;
}

void ScanGeometry::validate() const {
  if (num_views == 0 || num_detectors == 0) {
    throw ContractViolation("scan geometry needs at least one view and one detector");
  }
  require_length(num_views, angles.size(), "geometry angles");
  if (!(detector_spacing > 0.0)) throw ContractViolation("detector spacing must be positive");
  for (std::size_t v = 0; v < angles.size(); ++v) {
    if (!(angles[v] >= 0.0 && angles[v] < std::numbers::pi)) {
      throw ContractViolation("view angles must lie in [0, pi)");
    }
    if (v > 0 && !(angles[v] > angles[v - 1])) {
      throw ContractViolation("view angles must be strictly ascending");
    }
  }
}

ScanGeometry make_uniform_geometry(std::size_t num_views, std::size_t num_detectors,
                                   double detector_spacing) {
  ScanGeometry g;
  g.num_views = num_views;
  g.num_detectors = num_detectors;
  g.detector_spacing = detector_spacing;
  g.angles.resize(num_views);
  for (std::size_t v = 0; v < num_views; ++v) {
    g.angles[v] = std::numbers::pi * static_cast<double>(v) / static_cast<double>(num_views);
  }
  g.validate();
  return g;
}

std::vector<std::string> geometry_warnings(const ScanGeometry& geometry, const ImageGrid& image) {
  std::vector<std::string> out;
  if (geometry.num_measurements() > image.size()) {
    out.push_back("measurement count m=" + std::to_string(geometry.num_measurements()) +
                  " exceeds image size n=" + std::to_string(image.size()) +
                  " (outside the m <= n regime)");
  }
  return out;
}

void SinogramData::validate() const {
  geometry.validate();
  require_length(geometry.num_measurements(), b.size(), "sinogram b");
  require_length(geometry.num_measurements(), w.size(), "sinogram weights");
  for (double wi : w) {
    if (!(wi > 0.0) || !std::isfinite(wi)) {
      throw ContractViolation("statistical weights must be strictly positive");
    }
  }
}

// ---------------------------------------------------------------------------

ImageGrid make_phantom(std::size_t nx, std::size_t ny, double spacing, const PhantomSpec& spec) {
  if (nx < 8 || ny < 8) throw ContractViolation("phantom grid must be at least 8x8");
  for (const auto& e : spec) {
    if (!(e.axis_x > 0.0) || !(e.axis_y > 0.0)) {
      throw ContractViolation("phantom ellipse axes must be positive");
    }
  }
  ImageGrid img(nx, ny, spacing);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double v = (static_cast<double>(iy) + 0.5) / static_cast<double>(ny) * 2.0 - 1.0;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double u = (static_cast<double>(ix) + 0.5) / static_cast<double>(nx) * 2.0 - 1.0;
      double value = 0.0;
      for (const auto& e : spec) {
        const double c = std::cos(e.rotation);
        const double s = std::sin(e.rotation);
        const double du = u - e.center_x;
        const double dv = v - e.center_y;
        const double pu = (c * du + s * dv) / e.axis_x;
        const double pv = (-s * du + c * dv) / e.axis_y;
        if (pu * pu + pv * pv <= 1.0) value += e.intensity;
      }
      img.values[iy * nx + ix] = value;
    }
  }
  return img;
}

// ---------------------------------------------------------------------------

std::vector<ParallelBeamProjector::RayEntry> trace_ray(double angle, double offset, std::size_t nx,
                                                       std::size_t ny, double spacing) {
  std::vector<ParallelBeamProjector::RayEntry> out;
  constexpr double kParallel = 1e-14;

  const double px = offset * std::cos(angle);
  const double py = offset * std::sin(angle);
  const double dx = -std::sin(angle);
  const double dy = std::cos(angle);

  const double xmin = -0.5 * static_cast<double>(nx) * spacing;
  const double ymin = -0.5 * static_cast<double>(ny) * spacing;
  const double xmax = -xmin;
  const double ymax = -ymin;

  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  bool missed = false;
  auto clip = [&](double p, double d, double lo, double hi) {
    if (std::abs(d) < kParallel) {
      if (p < lo || p >= hi) missed = true;
      return;
    }
    const double t1 = (lo - p) / d;
    const double t2 = (hi - p) / d;
    tmin = std::max(tmin, std::min(t1, t2));
    tmax = std::min(tmax, std::max(t1, t2));
  };
  clip(px, dx, xmin, xmax);
  clip(py, dy, ymin, ymax);
  if (missed || !(tmax > tmin) || !std::isfinite(tmin) || !std::isfinite(tmax)) return out;

  std::vector<double> ts;
  ts.reserve(nx + ny + 2);
  ts.push_back(tmin);
  ts.push_back(tmax);
  if (std::abs(dx) >= kParallel) {
    for (std::size_t i = 1; i < nx; ++i) {
      const double t = (xmin + static_cast<double>(i) * spacing - px) / dx;
      if (t > tmin && t < tmax) ts.push_back(t);
    }
  }
  if (std::abs(dy) >= kParallel) {
    for (std::size_t i = 1; i < ny; ++i) {
      const double t = (ymin + static_cast<double>(i) * spacing - py) / dy;
      if (t > tmin && t < tmax) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());

  const double min_len = 1e-12 * spacing;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double len = ts[k + 1] - ts[k];
    if (len <= min_len) continue;
    const double tm = 0.5 * (ts[k] + ts[k + 1]);
    const double mx = px + tm * dx;
    const double my = py + tm * dy;
    auto cell = [spacing](double coord, double lo, std::size_t count) {
      const double f = std::floor((coord - lo) / spacing);
      if (f < 0.0) return std::size_t{0};
      return std::min(static_cast<std::size_t>(f), count - 1);
    };
    const std::size_t ix = cell(mx, xmin, nx);
    const std::size_t iy = cell(my, ymin, ny);
    out.push_back({static_cast<std::uint32_t>(iy * nx + ix), len});
  }
  return out;
}

ParallelBeamProjector::ParallelBeamProjector(ScanGeometry geometry, std::size_t nx, std::size_t ny,
                                             double spacing)
    : LinearOperator(nx * ny, geometry.num_measurements(), OperatorKind::Projector),
      geometry_(std::move(geometry)),
      nx_(nx),
      ny_(ny),
      spacing_(spacing) {
  geometry_.validate();
  if (!(spacing > 0.0)) throw ContractViolation("projector pixel spacing must be positive");
  row_start_.reserve(geometry_.num_measurements() + 1);
  row_start_.push_back(0);
  for (std::size_t v = 0; v < geometry_.num_views; ++v) {
    for (std::size_t j = 0; j < geometry_.num_detectors; ++j) {
      auto ray = trace_ray(geometry_.angles[v], geometry_.detector_offset(j), nx, ny, spacing);
      entries_.insert(entries_.end(), ray.begin(), ray.end());
      row_start_.push_back(entries_.size());
    }
  }
}

std::span<const ParallelBeamProjector::RayEntry> ParallelBeamProjector::ray(std::size_t index) const {
  if (index >= range_len()) throw ContractViolation("ray index out of range");
  return {entries_.data() + row_start_[index], row_start_[index + 1] - row_start_[index]};
}

void ParallelBeamProjector::do_forward_add(std::span<const double> x, std::span<double> out,
                                           double scale) const {
  for (std::size_t r = 0; r < range_len(); ++r) {
    double acc = 0.0;
    for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
      acc += entries_[e].length * x[entries_[e].pixel];
    }
    out[r] += scale * acc;
  }
}

void ParallelBeamProjector::do_adjoint_add(std::span<const double> y, std::span<double> out,
                                           double scale) const {
  for (std::size_t r = 0; r < range_len(); ++r) {
    const double yr = scale * y[r];
    if (yr == 0.0) continue;
    for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
      out[entries_[e].pixel] += entries_[e].length * yr;
    }
  }
}

std::shared_ptr<const ParallelBeamProjector> make_projector(const ScanGeometry& geometry,
                                                            const ImageGrid& grid) {
  return std::make_shared<ParallelBeamProjector>(geometry, grid.nx, grid.ny, grid.spacing);
}

Vector project(const ScanGeometry& geometry, const ImageGrid& image) {
  image.validate();
  ParallelBeamProjector proj(geometry, image.nx, image.ny, image.spacing);
  return apply_forward(proj, image.values);
}

Vector backproject(const ScanGeometry& geometry, const ImageGrid& grid_shape,
                   std::span<const double> sino_values) {
  ParallelBeamProjector proj(geometry, grid_shape.nx, grid_shape.ny, grid_shape.spacing);
  return apply_adjoint(proj, sino_values);
}

SinogramData simulate_data(const ImageGrid& phantom, const ParallelBeamProjector& projector,
                           double noise_std, std::uint64_t seed, Weighting weighting) {
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw ContractViolation("noise_std must be a nonnegative finite value");
  }
  phantom.validate();
  SinogramData data;
  data.geometry = projector.geometry();
  data.b = apply_forward(projector, phantom.values);
  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_std);
    for (auto& bi : data.b) bi += gauss(rng);
  }
  const double wi =
      weighting == Weighting::Uniform ? 1.0 : 1.0 / std::max(noise_std * noise_std, 1e-12);
  data.w.assign(data.b.size(), wi);
  return data;
}

SinogramData simulate_data(const ImageGrid& phantom, const ScanGeometry& geometry,
                           double noise_std, std::uint64_t seed, Weighting weighting) {
  ParallelBeamProjector proj(geometry, phantom.nx, phantom.ny, phantom.spacing);
  return simulate_data(phantom, proj, noise_std, seed, weighting);
}

}  // namespace pdfw
