#include "morse_lsm/tridiagonal.hpp"

#include "morse_lsm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace morse_lsm {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

void check_shape(const SymTridiagonal& t) {
  if (t.diagonal.empty() || t.off_diagonal.size() + 1 != t.diagonal.size())
    throw DomainError("SymTridiagonal: off-diagonal must have size n-1");
}

struct Gershgorin {
  double lo;
  double hi;
};

Gershgorin gershgorin(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::fabs(t.off_diagonal[i - 1]);
    if (i + 1 < n) radius += std::fabs(t.off_diagonal[i]);
    lo = std::min(lo, t.diagonal[i] - radius);
    hi = std::max(hi, t.diagonal[i] + radius);
  }
  const double pad = 2.0 * eps * std::max(std::fabs(lo), std::fabs(hi)) + eps;
  return {lo - pad, hi + pad};
}

} // namespace

std::size_t count_below(const SymTridiagonal& t, double x) {
  const std::size_t n = t.size();
  const double floor = eps * (1.0 + std::fabs(x));
  std::size_t count = 0;
  double q = t.diagonal[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -floor;
    if (q < 0.0) ++count;
    if (i + 1 == n) break;
    const double e = t.off_diagonal[i];
    q = (t.diagonal[i + 1] - x) - e * e / q;
  }
  return count;
}

double bisect_eigenvalue(const SymTridiagonal& t, std::size_t index, double lo, double hi,
                         double relative_width) {
  const double width = std::max(relative_width, 2.0 * eps);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (hi - lo <= width * std::max(std::fabs(lo), std::fabs(hi))) break;
    if (count_below(t, mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t k) {
  check_shape(t);
  if (k > t.size()) throw DomainError("lowest_eigenvalues: k exceeds matrix size");
  const auto bounds = gershgorin(t);
  std::vector<double> values;
  values.reserve(k);
  double lo = bounds.lo;
  for (std::size_t j = 0; j < k; ++j) {
    values.push_back(bisect_eigenvalue(t, j, lo, bounds.hi));
    lo = values.back() - 4.0 * eps * (1.0 + std::fabs(values.back()));
  }
  return values;
}

namespace {

/// LU factorization of a general tridiagonal matrix with row interchanges,
/// the LAPACK dgttrf layout: two superdiagonals after pivoting.
class TridiagonalLU {
public:
  TridiagonalLU(std::vector<double> sub, std::vector<double> diag, std::vector<double> super)
      : dl_(std::move(sub)), d_(std::move(diag)), du_(std::move(super)),
        du2_(d_.size() > 2 ? d_.size() - 2 : 0, 0.0), pivot_(d_.size() > 1 ? d_.size() - 1 : 0, 0) {
    const std::size_t n = d_.size();
    double scale = 0.0;
    for (double v : d_) scale = std::max(scale, std::fabs(v));
    for (double v : dl_) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
        if (d_[i] != 0.0) {
          const double fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivot_[i] = 1;
      }
    }
    const double tiny = eps * (scale > 0.0 ? scale : 1.0);
    for (auto& v : d_)
      if (v == 0.0) v = tiny;
  }

  void solve_in_place(std::vector<double>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (pivot_[i] == 0) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<unsigned char> pivot_;
};

void normalize(std::vector<double>& v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::fabs(x));
  if (peak == 0.0 || !std::isfinite(peak)) throw DomainError("inverse iteration broke down");
  double sum = 0.0;
  for (auto& x : v) {
    x /= peak;
    sum += x * x;
  }
  const double inv = 1.0 / std::sqrt(sum);
  for (auto& x : v) x *= inv;
}

void project_out(std::vector<double>& v, std::span<const std::vector<double>> previous) {
  for (const auto& p : previous) {
    if (p.size() != v.size()) continue;
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * p[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * p[i];
  }
}

} // namespace

std::vector<double> eigenvector(const SymTridiagonal& t, double eigenvalue,
                                std::span<const std::vector<double>> previous) {
  check_shape(t);
  const std::size_t n = t.size();
  if (n == 1) return {1.0};

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = t.diagonal[i] - eigenvalue;
  const TridiagonalLU lu(t.off_diagonal, std::move(diag), t.off_diagonal);

  // Fixed pseudo-random start so results never depend on scheduling.
  std::vector<double> v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (auto& x : v) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }

  for (int iter = 0; iter < 3; ++iter) {
    project_out(v, previous);
    lu.solve_in_place(v);
    normalize(v);
  }
  project_out(v, previous);
  normalize(v);
  return v;
}

double rayleigh_quotient(const SymTridiagonal& t, std::span<const double> x) {
  // Written as Σ r_i x_i² - Σ e_i (x_i - x_{i+1})² with r_i = d_i + e_{i-1} + e_i.
  // For a discretized -½ d²/dr² + V the large 1/h² parts cancel inside r_i
  // once, instead of across the whole sum.
  const std::size_t n = t.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = t.diagonal[i];
    if (i > 0) r += t.off_diagonal[i - 1];
    if (i + 1 < n) r += t.off_diagonal[i];
    sum += r * x[i] * x[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i] - x[i + 1];
    sum -= t.off_diagonal[i] * d * d;
  }
  return sum;
}

Eigenpairs lowest_eigenpairs(const SymTridiagonal& t, std::size_t k) {
  check_shape(t);
  if (k > t.size()) throw DomainError("lowest_eigenpairs: k exceeds matrix size");
  const auto bounds = gershgorin(t);
  Eigenpairs out;
  out.values.reserve(k);
  out.vectors.reserve(k);
  double lo = bounds.lo;
  for (std::size_t j = 0; j < k; ++j) {
    // upper end of the bracket: first probe above lo that counts j+1 values
    double hi = std::min(bounds.hi, lo + std::max(1.0, std::fabs(lo)));
    while (count_below(t, hi) <= j && hi < bounds.hi) hi = std::min(bounds.hi, lo + 2.0 * (hi - lo));
    const double rough = bisect_eigenvalue(t, j, lo, hi, 1e-7);
    out.vectors.push_back(eigenvector(t, rough, out.vectors));
    out.values.push_back(rayleigh_quotient(t, out.vectors.back()));
    lo = rough;
  }
  return out;
}

} // namespace morse_lsm
