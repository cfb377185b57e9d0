#include "morse_lsm/dipole.hpp"
#include "morse_lsm/errors.hpp"
#include "morse_lsm/morse.hpp"

#include "oracle_values.hpp"

#include <doctest.h>

#include <cmath>

using namespace morse_lsm;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

} // namespace

TEST_CASE("transition moment symmetry and shift invariance") {
  const MorseParams p{12, 1, 1};
  const RadialGrid grid(-1.5, 25.0, 20001);
  const auto s0 = analytic_wavefunction(p, 0, grid);
  const auto s1 = analytic_wavefunction(p, 1, grid);
  CHECK(transition_moment(s0, s1) == transition_moment(s1, s0));

  // ⟨0|r + δ|1⟩ = ⟨0|r|1⟩ since ⟨0|1⟩ = 0. Shifting the grid shifts r.
  const RadialGrid shifted(grid.r_min() + 2.0, grid.r_max() + 2.0, grid.size());
  const auto t0 = analytic_wavefunction({12, 1, 3}, 0, shifted);
  const auto t1 = analytic_wavefunction({12, 1, 3}, 1, shifted);
  CHECK(std::fabs(transition_moment(t0, t1)) ==
        doctest::Approx(std::fabs(transition_moment(s0, s1))).epsilon(1e-8));

  // ⟨0|r|0⟩ > r0: the well is softer on the outside
  CHECK(transition_moment(s0, s0) > p.r0);

  const auto other = analytic_wavefunction(p, 1, RadialGrid(-1.5, 25.0, 20003));
  CHECK_THROWS_AS(transition_moment(s0, other), DomainError);
}

TEST_CASE("dipole_01 matches the pinned oracle") {
  const auto result = dipole_01({12, 1, 1});
  // closed-form value at λ = sqrt(24)
  CHECK(rel(result.value, 0.334355386203) < 1e-5);
  CHECK(result.value > 0.0);
  CHECK(result.estimated_error < 1e-5 * result.value);
  CHECK(rel(result.ground_energy, -9.67551025722) < 1e-8);
  CHECK(rel(result.excited_energy, -5.77653077165) < 1e-8);
  for (const auto& pt : oracle::dipole_points) {
    if (pt.depth != 16.0) continue;
    CHECK(rel(dipole_01({pt.depth, pt.inv_width, 1}).value, pt.d01) < 1e-5);
  }
}

TEST_CASE("dipole translation invariance") {
  const double a = dipole_01({12, 1, 1}).value;
  const double b = dipole_01({12, 1, 5}).value;
  CHECK(rel(b, a) < 1e-6);
}

TEST_CASE("dipole scaling law") {
  const double base = dipole_01({12, 1, 1}).value;
  CHECK(rel(dipole_01({3, 0.5, 1}).value, 2.0 * base) < 1e-5);
  CHECK(rel(dipole_01({48, 2, 1}).value, 0.5 * base) < 1e-5);
}

TEST_CASE("lambda collapse") {
  // λ = sqrt(2C)/a = 4 for both
  const double d1 = dipole_01({8, 1, 1}).value;
  const double d2 = dipole_01({18, 1.5, 1}).value;
  CHECK(rel(1.5 * d2, 1.0 * d1) < 1e-5);
}

TEST_CASE("dipole domain errors") {
  CHECK_THROWS_AS(dipole_01({0.1, 2, 1}), InsufficientBoundStates);
  // λ = 1.4: one bound state
  CHECK_THROWS_AS(dipole_01({0.98, 1, 1}), InsufficientBoundStates);
}

TEST_CASE("shallow wells converge") {
  const auto r = dipole_01({6.3, 1.77778, 1}); // λ ≈ 2.0
  CHECK(r.value > 0.0);
  CHECK(r.estimated_error < 1e-6 * r.value);
  const auto near = dipole_01({11.7, 3.11111, 1}); // λ ≈ 1.55
  CHECK(near.value > 0.0);
}
