#include "morse_lsm/radial_grid.hpp"

#include "morse_lsm/errors.hpp"

#include <cmath>

namespace morse_lsm {

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t n_points)
    : r_min_(r_min), r_max_(r_max), n_points_(n_points) {
  if (!std::isfinite(r_min) || !std::isfinite(r_max) || !(r_min < r_max))
    throw DomainError("RadialGrid: need finite r_min < r_max");
  if (n_points < 3) throw DomainError("RadialGrid: need at least 3 points");
}

std::vector<double> RadialGrid::points() const {
  std::vector<double> r(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) r[i] = (*this)[i];
  return r;
}

RadialGrid RadialGrid::halved() const { return RadialGrid(r_min_, r_max_, 2 * n_points_ - 1); }

RadialGrid RadialGrid::widened() const {
  return RadialGrid(r_min_, r_min_ + 2.0 * (r_max_ - r_min_), 2 * n_points_ - 1);
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    tail = 0.5 * h * (f[n - 2] + f[n - 1]);
    --intervals;
  }
  if (intervals == 0) return tail;
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) (i % 2 == 1 ? odd : even) += f[i];
  return h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[intervals]) + tail;
}

double norm_squared(const BoundState& state) {
  double sum = 0.0;
  const auto& v = state.values;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    sum += w * v[i] * v[i];
  }
  return sum * state.grid.spacing();
}

} // namespace morse_lsm
