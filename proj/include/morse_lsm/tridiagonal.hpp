#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace morse_lsm {

/// Real symmetric tridiagonal matrix: diagonal of size n, off-diagonal of size n-1.
struct SymTridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const noexcept { return diagonal.size(); }
};

/// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t count_below(const SymTridiagonal& t, double x);

/// The k smallest eigenvalues in ascending order, by bisection on the Sturm
/// count. Converged to a few ulps of the Gershgorin scale.
std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t k);

/// Bisection for eigenvalue `index` (0-based) inside a bracket [lo, hi] known
/// to contain it.
double bisect_eigenvalue(const SymTridiagonal& t, std::size_t index, double lo, double hi,
                         double relative_width = 0.0);

/// Unit-norm eigenvector for a computed eigenvalue by inverse iteration with a
/// partially pivoted tridiagonal LU. Vectors in `previous` are projected out
/// (for nearby eigenvalues). Deterministic start vector.
std::vector<double> eigenvector(const SymTridiagonal& t, double eigenvalue,
                                std::span<const std::vector<double>> previous = {});

struct Eigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

/// The k lowest eigenpairs: bisection to a loose bracket, inverse iteration for
/// the vectors, then each eigenvalue taken as the Rayleigh quotient of its
/// vector. Agrees with full bisection to rounding in the quotient.
Eigenpairs lowest_eigenpairs(const SymTridiagonal& t, std::size_t k);

/// xᵀ T x for a unit vector x.
double rayleigh_quotient(const SymTridiagonal& t, std::span<const double> x);

} // namespace morse_lsm
