#include "morse_lsm/dipole.hpp"

#include "morse_lsm/errors.hpp"

#include <cmath>
#include <vector>

namespace morse_lsm {

double transition_moment(const BoundState& state_a, const BoundState& state_b) {
  if (!state_a.grid.same_as(state_b.grid) || state_a.values.size() != state_b.values.size() ||
      state_a.values.size() != state_a.grid.size())
    throw DomainError("transition_moment: states live on different grids");
  const auto& grid = state_a.grid;
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    integrand[i] = (state_a.values[i] * state_b.values[i]) * grid[i];
  return simpson(integrand, grid.spacing());
}

DipoleResult dipole_01(const MorseParams& params, const SolverConfig& config) {
  params.validate();
  config.validate();
  const auto count = bound_state_count(params);
  if (count < 2) throw InsufficientBoundStates(count, 2);

  RadialGrid grid = auto_domain(params, config);
  RichardsonSequence moment;
  RichardsonSequence ground;
  RichardsonSequence excited;
  for (int level = 0;; ++level) {
    const auto states = solve_on_grid(params, grid, 2);
    moment.push(transition_moment(states[0], states[1]));
    ground.push(states[0].energy);
    excited.push(states[1].energy);

    if (moment.converged(dipole_tolerance) && ground.converged(config.energy_tolerance) &&
        excited.converged(config.energy_tolerance)) {
      DipoleResult result;
      result.value = std::fabs(moment.best());
      result.estimated_error = *moment.change();
      result.ground_energy = ground.best();
      result.excited_energy = excited.best();
      result.grid = grid;
      result.refinements = level;
      return result;
    }
    if (level >= config.max_refinements)
      throw ConvergenceError("dipole_01: refinement budget exhausted",
                             {std::fabs(moment.best()), ground.best(), excited.best()});
    grid = grid.halved();
  }
}

} // namespace morse_lsm
