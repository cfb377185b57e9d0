#pragma once

#include "morse_lsm/bound_solver.hpp"
#include "morse_lsm/morse.hpp"

namespace morse_lsm {

/// Relative change in d01 allowed between successive extrapolations.
inline constexpr double dipole_tolerance = 1e-6;

/// ∫ψ_a r ψ_b dr by composite Simpson. Signed; states must share a grid.
double transition_moment(const BoundState& state_a, const BoundState& state_b);

struct DipoleResult {
  double value = 0.0;           ///< |⟨0|r|1⟩|, unit effective charge
  double estimated_error = 0.0; ///< last change between extrapolated values
  double ground_energy = 0.0;
  double excited_energy = 0.0;
  RadialGrid grid{0.0, 1.0, 3}; ///< finest grid used
  int refinements = 0;          ///< grid halvings after the starting grid
};

/// End to end: auto domain, lowest two states, transition moment, with
/// grid halving until d01 and both energies settle.
DipoleResult dipole_01(const MorseParams& params, const SolverConfig& config = {});

} // namespace morse_lsm
