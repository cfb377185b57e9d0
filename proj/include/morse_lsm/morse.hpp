#pragma once

// Closed-form Morse oscillator: V(r) = D [exp(-2α(r-r0)) - 2 exp(-α(r-r0))].
//
// Units: ħ = 1 and m = 1 throughout the library. Under this convention the
// shape of the spectrum depends only on λ = sqrt(2D)/α.

#include "morse_lsm/radial_grid.hpp"

#include <cstddef>

namespace morse_lsm {

namespace units {
inline constexpr double hbar = 1.0;
inline constexpr double mass = 1.0;
} // namespace units

struct MorseParams {
  double depth = 1.0;     ///< well depth D (energy)
  double inv_width = 1.0; ///< α, inverse length
  double r0 = 1.0;        ///< equilibrium position

  /// Throws DomainError unless depth > 0, inv_width > 0 and r0 is finite.
  void validate() const;
};

double potential_at(const MorseParams& params, double r);

/// λ = sqrt(2D)/α.
double depth_parameter(const MorseParams& params);

/// floor(λ - 1/2) + 1 for λ > 1/2, zero otherwise.
std::size_t bound_state_count(const MorseParams& params);

/// E_n = -D (1 - (n + 1/2)/λ)². Throws DomainError for n outside the bound range.
double analytic_energy(const MorseParams& params, int n);

/// Estimated probability mass of a normalized state beyond each grid endpoint,
/// from the exponential decay rate there. Infinite when an endpoint lies in the
/// classically allowed region.
struct TailMass {
  double left = 0.0;
  double right = 0.0;
};

/// Closed-form eigenfunction
///   ψ_n ∝ z^(λ-n-1/2) e^(-z/2) L_n^(2λ-2n-1)(z),  z = 2λ exp(-α(r-r0)),
/// normalized by trapezoid quadrature on `grid`, outermost lobe positive.
/// Throws DomainError if either endpoint tail mass exceeds `tail_tolerance`.
BoundState analytic_wavefunction(const MorseParams& params, int n, const RadialGrid& grid,
                                 double tail_tolerance = 1e-8);

/// Same closed-form state without the tail check; `tails` receives the
/// endpoint mass estimates.
BoundState analytic_wavefunction_unchecked(const MorseParams& params, int n,
                                           const RadialGrid& grid, TailMass& tails);

/// Generalized Laguerre polynomial L_n^(alpha)(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);

} // namespace morse_lsm
