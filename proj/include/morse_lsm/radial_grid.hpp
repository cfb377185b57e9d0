#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace morse_lsm {

/// Uniform grid on [r_min, r_max]; point i sits at r_min + i*h.
class RadialGrid {
public:
  RadialGrid(double r_min, double r_max, std::size_t n_points);

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t size() const noexcept { return n_points_; }
  double spacing() const noexcept { return (r_max_ - r_min_) / static_cast<double>(n_points_ - 1); }
  double operator[](std::size_t i) const noexcept {
    return r_min_ + static_cast<double>(i) * spacing();
  }
  std::vector<double> points() const;

  /// Same window, spacing halved (2n-1 points); every old point is kept.
  RadialGrid halved() const;

  /// Doubles the window outward (r_max moves) keeping the spacing.
  RadialGrid widened() const;

  bool same_as(const RadialGrid& other) const noexcept {
    return r_min_ == other.r_min_ && r_max_ == other.r_max_ && n_points_ == other.n_points_;
  }

private:
  double r_min_;
  double r_max_;
  std::size_t n_points_;
};

/// One normalized eigenpair sampled on a grid (endpoint samples included).
struct BoundState {
  int n = 0;
  double energy = 0.0;
  RadialGrid grid{0.0, 1.0, 3};
  std::vector<double> values;
};

// Quadrature over samples on a uniform grid.
double trapezoid(std::span<const double> f, double h);
/// Composite Simpson; when the interval count is odd the last interval is
/// integrated by the trapezoid rule.
double simpson(std::span<const double> f, double h);

/// Trapezoid norm of a state, ∫ψ² dr.
double norm_squared(const BoundState& state);

} // namespace morse_lsm
