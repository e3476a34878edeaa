#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "trailscape/errors.hpp"

namespace trailscape {

// ---------------------------------------------------------------------------
// 1-D medium: intensities over a discretized value axis.
// ---------------------------------------------------------------------------

struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 100;

  double step() const noexcept { return (hi - lo) / cells; }
  double center(int i) const noexcept { return lo + (i + 0.5) * step(); }

  bool operator==(const Grid1D&) const = default;

  void validate() const {
    if (!(lo < hi) || cells < 2) throw invalid_parameter("Grid1D: need lo < hi and cells >= 2");
  }
};

// Trapezoidal deposit on the value axis. Support is [center - width/2,
// center + width/2]; the flat top spans half the support, flanks fall
// linearly to zero.
struct Mark1D {
  double center = 0.0;
  double width = 0.1;  // epsilon
  double height = 1.0;

  double value_at(double x) const noexcept {
    const double d = std::abs(x - center);
    const double half = width / 2.0;
    const double top = width / 4.0;
    if (d <= top) return height;
    if (d >= half) return 0.0;
    return height * (half - d) / (half - top);
  }

  void validate() const {
    if (!std::isfinite(center) || !std::isfinite(width) || !std::isfinite(height) ||
        width <= 0.0 || height < 0.0) {
      throw invalid_mark("Mark1D: non-finite or out-of-range parameters");
    }
  }
};

class Trail1D {
 public:
  Trail1D() : Trail1D(Grid1D{}) {}
  explicit Trail1D(Grid1D grid) : grid_(grid), intensity_(static_cast<std::size_t>(grid.cells), 0.0) {
    grid_.validate();
  }

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const double> intensity() const noexcept { return intensity_; }
  double operator[](int i) const noexcept { return intensity_[static_cast<std::size_t>(i)]; }
  int cells() const noexcept { return grid_.cells; }

  void deposit(const Mark1D& mark) {
    mark.validate();
    const double half = mark.width / 2.0;
    // Index range of cells whose centers can fall inside the support; out-of-grid
    // parts of the mark are clipped.
    int first = static_cast<int>(std::floor((mark.center - half - grid_.lo) / grid_.step() - 0.5));
    int last = static_cast<int>(std::ceil((mark.center + half - grid_.lo) / grid_.step() - 0.5));
    first = std::max(first, 0);
    last = std::min(last, grid_.cells - 1);
    for (int i = first; i <= last; ++i) {
      intensity_[static_cast<std::size_t>(i)] += mark.value_at(grid_.center(i));
    }
  }

  void evaporate(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
      throw invalid_parameter("evaporate: delta must be finite and >= 0");
    }
    for (double& v : intensity_) v = std::max(0.0, v - delta);
  }

  double total() const noexcept {
    double s = 0.0;
    for (double v : intensity_) s += v;
    return s;
  }

  bool all_zero() const noexcept {
    return std::all_of(intensity_.begin(), intensity_.end(), [](double v) { return v == 0.0; });
  }

  // Test hook: loads explicit cell intensities.
  static Trail1D from_values(Grid1D grid, std::span<const double> values) {
    Trail1D t(grid);
    if (values.size() != t.intensity_.size()) throw invalid_parameter("from_values: size mismatch");
    std::copy(values.begin(), values.end(), t.intensity_.begin());
    return t;
  }

 private:
  Grid1D grid_;
  std::vector<double> intensity_;
};

// ---------------------------------------------------------------------------
// 2-D medium: intensities over a planar grid.
// ---------------------------------------------------------------------------

struct Grid2D {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
  int nx = 100, ny = 100;

  double x_step() const noexcept { return (x_hi - x_lo) / nx; }
  double y_step() const noexcept { return (y_hi - y_lo) / ny; }
  double x_center(int i) const noexcept { return x_lo + (i + 0.5) * x_step(); }
  double y_center(int j) const noexcept { return y_lo + (j + 0.5) * y_step(); }
  int cell_count() const noexcept { return nx * ny; }

  // Row-major cell id, or -1 outside the grid. A point on an interior cell
  // boundary belongs to the lower-index cell.
  int cell_of(double x, double y) const noexcept {
    const int i = axis_cell(x, x_lo, x_step(), nx);
    const int j = axis_cell(y, y_lo, y_step(), ny);
    if (i < 0 || j < 0) return -1;
    return j * nx + i;
  }

  bool operator==(const Grid2D&) const = default;

  void validate() const {
    if (!(x_lo < x_hi) || !(y_lo < y_hi) || nx < 2 || ny < 2) {
      throw invalid_parameter("Grid2D: need positive extents and nx, ny >= 2");
    }
  }

 private:
  static int axis_cell(double v, double lo, double step, int n) noexcept {
    const double t = (v - lo) / step;
    if (t < 0.0 || t > static_cast<double>(n)) return -1;
    if (t == 0.0) return 0;
    return std::min(static_cast<int>(std::ceil(t)) - 1, n - 1);
  }
};

// Truncated-cone deposit: full height inside half the base radius, linear
// falloff to zero at the base radius.
struct Mark2D {
  double cx = 0.0, cy = 0.0;
  double base_radius = 1.0;
  double height = 1.0;

  double value_at(double x, double y) const noexcept {
    const double d = std::hypot(x - cx, y - cy);
    const double top = base_radius / 2.0;
    if (d <= top) return height;
    if (d >= base_radius) return 0.0;
    return height * (base_radius - d) / (base_radius - top);
  }

  void validate() const {
    if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(base_radius) ||
        !std::isfinite(height) || base_radius <= 0.0 || height < 0.0) {
      throw invalid_mark("Mark2D: non-finite or out-of-range parameters");
    }
  }
};

class Trail2D {
 public:
  Trail2D() : Trail2D(Grid2D{}) {}
  explicit Trail2D(Grid2D grid)
      : grid_(grid), intensity_(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0) {
    grid_.validate();
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const double> intensity() const noexcept { return intensity_; }
  double at(int i, int j) const noexcept {
    return intensity_[static_cast<std::size_t>(j) * grid_.nx + i];
  }
  double cell(int id) const noexcept { return intensity_[static_cast<std::size_t>(id)]; }

  void deposit(const Mark2D& mark) {
    mark.validate();
    const int i0 = std::max(0, static_cast<int>(std::floor((mark.cx - mark.base_radius - grid_.x_lo) / grid_.x_step() - 0.5)));
    const int i1 = std::min(grid_.nx - 1, static_cast<int>(std::ceil((mark.cx + mark.base_radius - grid_.x_lo) / grid_.x_step() - 0.5)));
    const int j0 = std::max(0, static_cast<int>(std::floor((mark.cy - mark.base_radius - grid_.y_lo) / grid_.y_step() - 0.5)));
    const int j1 = std::min(grid_.ny - 1, static_cast<int>(std::ceil((mark.cy + mark.base_radius - grid_.y_lo) / grid_.y_step() - 0.5)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const double v = mark.value_at(grid_.x_center(i), grid_.y_center(j));
        if (v > 0.0) intensity_[static_cast<std::size_t>(j) * grid_.nx + i] += v;
      }
    }
  }

  void evaporate(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
      throw invalid_parameter("evaporate: delta must be finite and >= 0");
    }
    for (double& v : intensity_) v = std::max(0.0, v - delta);
  }

  double max_intensity() const noexcept {
    double m = 0.0;
    for (double v : intensity_) m = std::max(m, v);
    return m;
  }

 private:
  Grid2D grid_;
  std::vector<double> intensity_;
};

// ---------------------------------------------------------------------------
// Trail similarity (fuzzy Jaccard): sum of cellwise minima over sum of
// cellwise maxima. 1 for identical trails, 0 for non-overlapping supports.
// Two all-zero trails share no structure and score 0.
// ---------------------------------------------------------------------------

namespace detail {
inline double jaccard_impl(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::min(a[i], b[i]);
    den += std::max(a[i], b[i]);
  }
  return den > 0.0 ? num / den : 0.0;
}
}  // namespace detail

inline double jaccard(const Trail1D& a, const Trail1D& b) {
  if (!(a.grid() == b.grid())) throw incompatible_grids("jaccard: trails on different grids");
  return detail::jaccard_impl(a.intensity(), b.intensity());
}

inline double jaccard(const Trail2D& a, const Trail2D& b) {
  if (!(a.grid() == b.grid())) throw incompatible_grids("jaccard: trails on different grids");
  return detail::jaccard_impl(a.intensity(), b.intensity());
}

// ---------------------------------------------------------------------------
// Marking + trailing over a sample sequence: per sample, evaporate the old
// trail and then release one trapezoidal mark at the sample value.
// ---------------------------------------------------------------------------

struct TrailParams {
  double mark_width = 0.1;   // epsilon
  double evaporation = 0.1;  // delta
  double mark_height = 1.0;
  Grid1D grid{};
};

inline Trail1D trail_of_series(std::span<const double> samples, const TrailParams& params) {
  Trail1D trail(params.grid);
  for (double s : samples) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw invalid_parameter("trail_of_series: sample outside [0, 1]");
    }
    trail.evaporate(params.evaporation);
    trail.deposit(Mark1D{s, params.mark_width, params.mark_height});
  }
  return trail;
}

}  // namespace trailscape
