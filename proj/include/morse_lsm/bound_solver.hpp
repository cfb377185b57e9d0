#pragma once

#include "morse_lsm/morse.hpp"
#include "morse_lsm/radial_grid.hpp"
#include "morse_lsm/tridiagonal.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace morse_lsm {

struct SolverConfig {
  double energy_tolerance = 1e-8; ///< relative change between successive estimates
  double tail_tolerance = 1e-10;  ///< probability mass allowed beyond each endpoint
  int max_refinements = 12;
  std::size_t initial_points = 1001;

  void validate() const;
  /// Stable short hash of the fields, recorded as field-file provenance.
  std::string digest() const;
};

/// Grid for a solve: r_min on the repulsive wall (V >= 20 D), r_max grown by
/// window doubling until the analytic tails of states 0 .. states-1 are below
/// tail_tolerance and the highest of those energies (E_1 by default) no longer
/// moves when the window doubles again.
RadialGrid auto_domain(const MorseParams& params, const SolverConfig& config,
                       std::size_t states = 2);

/// Three-point Hamiltonian -½ d²/dr² + V on the interior points of `grid`
/// (Dirichlet zeros at both endpoints): d_i = 1/h² + V(r_i), e_i = -1/(2h²).
SymTridiagonal discretize(const std::function<double(double)>& potential, const RadialGrid& grid);
SymTridiagonal discretize(const MorseParams& params, const RadialGrid& grid);

/// The k lowest eigenpairs of the discretized operator on one fixed grid.
/// States are trapezoid-normalized with the outermost lobe positive; energies
/// are the raw discrete eigenvalues.
std::vector<BoundState> solve_on_grid(const std::function<double(double)>& potential,
                                      const RadialGrid& grid, std::size_t k);
std::vector<BoundState> solve_on_grid(const MorseParams& params, const RadialGrid& grid,
                                      std::size_t k);

/// Energies extrapolated by Richardson steps over successive grid halvings
/// until two extrapolations agree to energy_tolerance·|E|. Wavefunctions come
/// from the finest grid used.
std::vector<BoundState> solve_lowest(const MorseParams& params, const SolverConfig& config,
                                     std::size_t k);

/// Interior sign changes among samples above 1e-6 of the peak magnitude.
std::size_t node_count(const BoundState& state);

/// Richardson extrapolation for a second-order scheme under h -> h/2.
/// Feed raw estimates in refinement order; `change()` is the difference of the
/// last two extrapolated values once two exist.
class RichardsonSequence {
public:
  void push(double raw);

  std::optional<double> extrapolated() const { return extrapolated_; }
  std::optional<double> change() const { return change_; }
  /// Extrapolated value if available, else the latest raw value.
  double best() const { return extrapolated_ ? *extrapolated_ : last_raw_.value_or(0.0); }
  bool converged(double relative_tolerance) const;

private:
  std::optional<double> last_raw_;
  std::optional<double> extrapolated_;
  std::optional<double> change_;
};

} // namespace morse_lsm
