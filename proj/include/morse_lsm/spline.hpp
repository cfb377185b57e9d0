#pragma once

#include <span>
#include <vector>

namespace morse_lsm {

/// Interpolating cubic spline over strictly increasing knots.
///
/// Natural: zero second derivative at both ends. Periodic: the data wrap from
/// the last knot back to the first, with an extra closing interval of length
/// `closing_interval`; the period is knots.back() - knots.front() + closing_interval.
class CubicSpline {
public:
  static CubicSpline natural(std::vector<double> knots, std::vector<double> values);
  static CubicSpline periodic(std::vector<double> knots, std::vector<double> values,
                              double closing_interval);

  double operator()(double t) const;
  /// First derivative.
  double derivative(double t) const;

  double period() const noexcept { return period_; }

private:
  CubicSpline() = default;
  std::size_t segment(double& t) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_; // second derivatives at the knots
  bool periodic_ = false;
  double period_ = 0.0;
};

} // namespace morse_lsm
