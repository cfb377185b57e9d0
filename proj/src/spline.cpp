#include "morse_lsm/spline.hpp"

#include "morse_lsm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace morse_lsm {

namespace {

// Thomas algorithm; sub[0] and super[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> super, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * super[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - super[i] * rhs[i + 1]) / diag[i];
  return rhs;
}

void check_knots(const std::vector<double>& knots, const std::vector<double>& values,
                 std::size_t minimum) {
  if (knots.size() != values.size()) throw DomainError("spline: knots and values differ in length");
  if (knots.size() < minimum) throw DomainError("spline: too few knots");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1])) throw DomainError("spline: knots must increase strictly");
}

} // namespace

CubicSpline CubicSpline::natural(std::vector<double> knots, std::vector<double> values) {
  check_knots(knots, values, 2);
  CubicSpline s;
  const std::size_t n = knots.size();
  s.second_.assign(n, 0.0);
  if (n > 2) {
    const std::size_t m = n - 2;
    std::vector<double> sub(m), diag(m), super(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = k + 1;
      const double h0 = knots[i] - knots[i - 1];
      const double h1 = knots[i + 1] - knots[i];
      sub[k] = h0;
      diag[k] = 2.0 * (h0 + h1);
      super[k] = h1;
      rhs[k] = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
    }
    const auto inner = solve_tridiagonal(sub, diag, super, rhs);
    std::copy(inner.begin(), inner.end(), s.second_.begin() + 1);
  }
  s.period_ = knots.back() - knots.front();
  s.knots_ = std::move(knots);
  s.values_ = std::move(values);
  return s;
}

CubicSpline CubicSpline::periodic(std::vector<double> knots, std::vector<double> values,
                                  double closing_interval) {
  check_knots(knots, values, 3);
  if (!(closing_interval > 0.0)) throw DomainError("spline: closing interval must be positive");
  const std::size_t n = knots.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots[i + 1] - knots[i];
  h[n - 1] = closing_interval;

  std::vector<double> sub(n), diag(n), super(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const std::size_t next = (i + 1) % n;
    sub[i] = h[prev];
    diag[i] = 2.0 * (h[prev] + h[i]);
    super[i] = h[i];
    rhs[i] = 6.0 * ((values[next] - values[i]) / h[i] - (values[i] - values[prev]) / h[prev]);
  }
  // Cyclic system via Sherman-Morrison on the corner entries.
  const double corner_top = sub[0];      // row 0, column n-1
  const double corner_bottom = super[n - 1]; // row n-1, column 0
  const double gamma = -diag[0];
  std::vector<double> modified = diag;
  modified[0] -= gamma;
  modified[n - 1] -= corner_bottom * corner_top / gamma;
  const auto x = solve_tridiagonal(sub, modified, super, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_bottom;
  const auto z = solve_tridiagonal(sub, modified, super, u);
  const double factor = (x[0] + corner_top * x[n - 1] / gamma) /
                        (1.0 + z[0] + corner_top * z[n - 1] / gamma);

  CubicSpline s;
  s.second_.resize(n + 1);
  for (std::size_t i = 0; i < n; ++i) s.second_[i] = x[i] - factor * z[i];
  s.second_[n] = s.second_[0];
  s.periodic_ = true;
  s.period_ = knots.back() - knots.front() + closing_interval;
  knots.push_back(knots.back() + closing_interval);
  values.push_back(values.front());
  s.knots_ = std::move(knots);
  s.values_ = std::move(values);
  return s;
}

std::size_t CubicSpline::segment(double& t) const {
  if (periodic_) {
    const double offset = std::fmod(t - knots_.front(), period_);
    t = knots_.front() + (offset < 0.0 ? offset + period_ : offset);
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(i, knots_.size() - 2);
}

double CubicSpline::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = 1.0 - a;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = 1.0 - a;
  return (values_[i + 1] - values_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * second_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * second_[i + 1];
}

} // namespace morse_lsm
