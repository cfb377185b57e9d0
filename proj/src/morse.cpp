#include "morse_lsm/morse.hpp"

#include "morse_lsm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace morse_lsm {

void MorseParams::validate() const {
  if (!(depth > 0.0) || !std::isfinite(depth)) throw DomainError("Morse depth must be positive");
  if (!(inv_width > 0.0) || !std::isfinite(inv_width))
    throw DomainError("Morse inverse width must be positive");
  if (!std::isfinite(r0)) throw DomainError("Morse r0 must be finite");
}

double potential_at(const MorseParams& params, double r) {
  const double e = std::exp(-params.inv_width * (r - params.r0));
  return params.depth * (e * e - 2.0 * e);
}

double depth_parameter(const MorseParams& params) {
  return std::sqrt(2.0 * units::mass * params.depth) / (params.inv_width * units::hbar);
}

std::size_t bound_state_count(const MorseParams& params) {
  const double lambda = depth_parameter(params);
  if (!(lambda > 0.5)) return 0;
  return static_cast<std::size_t>(std::floor(lambda - 0.5)) + 1;
}

double analytic_energy(const MorseParams& params, int n) {
  params.validate();
  const auto count = bound_state_count(params);
  if (n < 0 || static_cast<std::size_t>(n) >= count)
    throw DomainError("analytic_energy: n = " + std::to_string(n) + " outside bound range [0, " +
                      std::to_string(count) + ")");
  const double t = 1.0 - (n + 0.5) / depth_parameter(params);
  return -params.depth * t * t;
}

double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

namespace {

double endpoint_tail(double psi, double potential, double energy) {
  const double excess = potential - energy;
  if (!(excess > 0.0)) return std::numeric_limits<double>::infinity();
  const double kappa = std::sqrt(2.0 * units::mass * excess) / units::hbar;
  return psi * psi / (2.0 * kappa);
}

} // namespace

BoundState analytic_wavefunction_unchecked(const MorseParams& params, int n,
                                           const RadialGrid& grid, TailMass& tails) {
  const double energy = analytic_energy(params, n);
  const double lambda = depth_parameter(params);
  const double power = lambda - n - 0.5;
  const double alpha = 2.0 * lambda - 2.0 * n - 1.0;

  const std::size_t size = grid.size();
  std::vector<double> log_mag(size);
  std::vector<double> sign(size);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size; ++i) {
    const double z = 2.0 * lambda * std::exp(-params.inv_width * (grid[i] - params.r0));
    const double poly = laguerre(n, alpha, z);
    sign[i] = poly < 0.0 ? -1.0 : 1.0;
    log_mag[i] = (poly == 0.0 || z == 0.0) ? -std::numeric_limits<double>::infinity()
                                           : power * std::log(z) - 0.5 * z + std::log(std::fabs(poly));
    peak = std::max(peak, log_mag[i]);
  }

  BoundState state{n, energy, grid, std::vector<double>(size)};
  for (std::size_t i = 0; i < size; ++i) state.values[i] = sign[i] * std::exp(log_mag[i] - peak);

  const double scale = 1.0 / std::sqrt(norm_squared(state));
  for (auto& v : state.values) v *= scale;

  // outermost lobe positive
  double max_abs = 0.0;
  for (double v : state.values) max_abs = std::max(max_abs, std::fabs(v));
  for (std::size_t i = size; i-- > 0;) {
    if (std::fabs(state.values[i]) > 1e-6 * max_abs) {
      if (state.values[i] < 0.0)
        for (auto& v : state.values) v = -v;
      break;
    }
  }

  tails.left = endpoint_tail(state.values.front(), potential_at(params, grid.r_min()), energy);
  tails.right = endpoint_tail(state.values.back(), potential_at(params, grid.r_max()), energy);
  return state;
}

BoundState analytic_wavefunction(const MorseParams& params, int n, const RadialGrid& grid,
                                 double tail_tolerance) {
  TailMass tails;
  BoundState state = analytic_wavefunction_unchecked(params, n, grid, tails);
  if (!(tails.left <= tail_tolerance) || !(tails.right <= tail_tolerance))
    throw DomainError("analytic_wavefunction: grid too narrow for n = " + std::to_string(n) +
                      " (tail mass left " + std::to_string(tails.left) + ", right " +
                      std::to_string(tails.right) + ")");
  return state;
}

} // namespace morse_lsm
