#include "morse_lsm/bound_solver.hpp"

#include "morse_lsm/errors.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace morse_lsm {

void SolverConfig::validate() const {
  if (!(energy_tolerance > 0.0)) throw DomainError("energy_tolerance must be positive");
  if (!(tail_tolerance > 0.0)) throw DomainError("tail_tolerance must be positive");
  if (max_refinements < 1) throw DomainError("max_refinements must be at least 1");
  if (initial_points < 3) throw DomainError("initial_points must be at least 3");
}

std::string SolverConfig::digest() const {
  char canonical[256];
  std::snprintf(canonical, sizeof canonical,
                "fd3-richardson;energy_tolerance=%.17g;tail_tolerance=%.17g;max_refinements=%d;"
                "initial_points=%zu",
                energy_tolerance, tail_tolerance, max_refinements, initial_points);
  std::uint64_t hash = 0xcbf29ce484222325ull; // FNV-1a
  for (const char* p = canonical; *p; ++p) {
    hash ^= static_cast<unsigned char>(*p);
    hash *= 0x100000001b3ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016" PRIx64, hash);
  return out;
}

void RichardsonSequence::push(double raw) {
  if (last_raw_) {
    const double next = (4.0 * raw - *last_raw_) / 3.0;
    if (extrapolated_) change_ = std::fabs(next - *extrapolated_);
    extrapolated_ = next;
  }
  last_raw_ = raw;
}

bool RichardsonSequence::converged(double relative_tolerance) const {
  return change_ && extrapolated_ && *change_ < relative_tolerance * std::fabs(*extrapolated_);
}

SymTridiagonal discretize(const std::function<double(double)>& potential, const RadialGrid& grid) {
  const std::size_t interior = grid.size() - 2;
  const double h = grid.spacing();
  const double kinetic = units::hbar * units::hbar / (units::mass * h * h);
  SymTridiagonal t;
  t.diagonal.resize(interior);
  t.off_diagonal.assign(interior - 1, -0.5 * kinetic);
  for (std::size_t i = 0; i < interior; ++i) t.diagonal[i] = kinetic + potential(grid[i + 1]);
  return t;
}

SymTridiagonal discretize(const MorseParams& params, const RadialGrid& grid) {
  params.validate();
  return discretize([&params](double r) { return potential_at(params, r); }, grid);
}

namespace {

void fix_phase(std::vector<double>& values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::fabs(v));
  for (std::size_t i = values.size(); i-- > 0;) {
    if (std::fabs(values[i]) > 1e-6 * peak) {
      if (values[i] < 0.0)
        for (auto& v : values) v = -v;
      return;
    }
  }
}

std::vector<BoundState> states_from(const SymTridiagonal& t, const RadialGrid& grid, std::size_t k) {
  if (k > t.size()) throw DomainError("solve_on_grid: more states requested than grid unknowns");
  const auto pairs = lowest_eigenpairs(t, k);
  std::vector<BoundState> states;
  states.reserve(k);
  const double scale = 1.0 / std::sqrt(grid.spacing());
  for (std::size_t j = 0; j < k; ++j) {
    BoundState s{static_cast<int>(j), pairs.values[j], grid, std::vector<double>(grid.size(), 0.0)};
    const auto& v = pairs.vectors[j];
    // unit Euclidean norm -> unit trapezoid norm (endpoints are zero)
    for (std::size_t i = 0; i < v.size(); ++i) s.values[i + 1] = v[i] * scale;
    fix_phase(s.values);
    states.push_back(std::move(s));
  }
  return states;
}

} // namespace

std::vector<BoundState> solve_on_grid(const std::function<double(double)>& potential,
                                      const RadialGrid& grid, std::size_t k) {
  return states_from(discretize(potential, grid), grid, k);
}

std::vector<BoundState> solve_on_grid(const MorseParams& params, const RadialGrid& grid,
                                      std::size_t k) {
  return states_from(discretize(params, grid), grid, k);
}

RadialGrid auto_domain(const MorseParams& params, const SolverConfig& config,
                       std::size_t states) {
  params.validate();
  config.validate();
  states = std::max<std::size_t>(states, 2);
  const auto count = bound_state_count(params);
  if (count < states) throw InsufficientBoundStates(count, states);
  const int top = static_cast<int>(states) - 1;

  const double a = params.inv_width;
  const double wall_height = 20.0 * params.depth;
  // V = 20 D where exp(-a (r - r0)) = 1 + sqrt(21)
  double r_min = params.r0 - std::log(1.0 + std::sqrt(21.0)) / a;
  while (potential_at(params, r_min) < wall_height) r_min -= 1e-12 * std::max(1.0, std::fabs(r_min));
  double r_max = params.r0 + 4.0 / a;

  int attempts = 0;
  auto budget_spent = [&](const char* stage) {
    if (++attempts > config.max_refinements)
      throw ConvergenceError(std::string("auto_domain: refinement budget exhausted while ") + stage,
                             {r_min, r_max});
  };

  for (;;) {
    const RadialGrid probe(r_min, r_max, config.initial_points);
    bool left_ok = true;
    bool right_ok = true;
    for (int n = 0; n <= top; ++n) {
      TailMass tails;
      analytic_wavefunction_unchecked(params, n, probe, tails);
      left_ok = left_ok && tails.left < config.tail_tolerance;
      right_ok = right_ok && tails.right < config.tail_tolerance;
    }
    if (left_ok && right_ok) break;
    budget_spent("growing the window");
    if (!left_ok) r_min -= 1.0 / a;
    if (!right_ok) r_max = r_min + 2.0 * (r_max - r_min);
  }

  RadialGrid grid(r_min, r_max, config.initial_points);
  double e1 = solve_on_grid(params, grid, states)[top].energy;
  for (;;) {
    const RadialGrid wider = grid.widened();
    const double e1_wide = solve_on_grid(params, wider, states)[top].energy;
    if (std::fabs(e1_wide - e1) < config.energy_tolerance * std::fabs(e1)) return grid;
    budget_spent("confirming the top energy against window doubling");
    grid = wider;
    e1 = e1_wide;
  }
}

std::vector<BoundState> solve_lowest(const MorseParams& params, const SolverConfig& config,
                                     std::size_t k) {
  params.validate();
  config.validate();
  if (k < 1) throw DomainError("solve_lowest: k must be at least 1");
  const auto count = bound_state_count(params);
  if (count < k || count < 2) throw InsufficientBoundStates(count, std::max<std::size_t>(k, 2));

  RadialGrid grid = auto_domain(params, config, k);
  std::vector<RichardsonSequence> energy(k);
  for (int level = 0;; ++level) {
    auto states = solve_on_grid(params, grid, k);
    for (std::size_t j = 0; j < k; ++j) energy[j].push(states[j].energy);

    const bool done = std::all_of(energy.begin(), energy.end(), [&](const RichardsonSequence& e) {
      return e.converged(config.energy_tolerance);
    });
    if (done) {
      for (std::size_t j = 0; j < k; ++j) {
        states[j].energy = energy[j].best();
        if (!(states[j].energy < 0.0))
          throw ConvergenceError("solve_lowest: state " + std::to_string(j) + " is not bound",
                                 {states[j].energy});
      }
      return states;
    }
    if (level >= config.max_refinements) {
      std::vector<double> best;
      for (const auto& e : energy) best.push_back(e.best());
      throw ConvergenceError("solve_lowest: refinement budget exhausted", best);
    }
    grid = grid.halved();
  }
}

std::size_t node_count(const BoundState& state) {
  double peak = 0.0;
  for (double v : state.values) peak = std::max(peak, std::fabs(v));
  const double floor = 1e-6 * peak;
  std::size_t changes = 0;
  int last_sign = 0;
  for (double v : state.values) {
    if (std::fabs(v) <= floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

} // namespace morse_lsm
