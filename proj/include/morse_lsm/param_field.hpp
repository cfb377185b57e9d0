#pragma once

#include "morse_lsm/bound_solver.hpp"
#include "morse_lsm/morse.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace morse_lsm {

struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  double at(std::size_t i) const noexcept {
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  double step() const noexcept { return (max - min) / static_cast<double>(count - 1); }
};

/// Point in (inverse width, depth) parameter space.
struct ParamPoint {
  double inv_width = 0.0;
  double depth = 0.0;

  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

/// Point in the unit-square frame of a ParamGrid, x along inverse width and y
/// along depth. Normals, distances and speeds are all measured here.
struct UnitPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Rectangular (α, D) sampling grid. Defaults are α in [0.8, 2], D in [12, 26].
struct ParamGrid {
  Axis inv_width{0.8, 2.0, 61};
  Axis depth{12.0, 26.0, 71};

  void validate() const;
  std::size_t size() const noexcept { return inv_width.count * depth.count; }

  UnitPoint to_unit(const ParamPoint& p) const noexcept {
    return {(p.inv_width - inv_width.min) / (inv_width.max - inv_width.min),
            (p.depth - depth.min) / (depth.max - depth.min)};
  }
  ParamPoint from_unit(const UnitPoint& u) const noexcept {
    return {inv_width.min + u.x * (inv_width.max - inv_width.min),
            depth.min + u.y * (depth.max - depth.min)};
  }
  bool contains(const ParamPoint& p, double slack = 1e-12) const noexcept {
    const auto u = to_unit(p);
    return u.x >= -slack && u.x <= 1.0 + slack && u.y >= -slack && u.y <= 1.0 + slack;
  }

  friend bool operator==(const ParamGrid& a, const ParamGrid& b) noexcept {
    return a.inv_width.min == b.inv_width.min && a.inv_width.max == b.inv_width.max &&
           a.inv_width.count == b.inv_width.count && a.depth.min == b.depth.min &&
           a.depth.max == b.depth.max && a.depth.count == b.depth.count;
  }
};

/// (α, D, r0) -> (α/s, D·s, r0). Throws DomainError for s <= 0.
MorseParams apply_scale(const MorseParams& params, double s);

struct ParamVelocity {
  double d_inv_width = 0.0; ///< dα/ds = -α/s²
  double d_depth = 0.0;     ///< dD/ds = D
};

/// Derivative of the scale trajectory at s for base (unscaled) parameters.
ParamVelocity velocity_field(const MorseParams& params, double s);

/// d01 sampled over a ParamGrid at one scale. Row-major with depth rows and
/// inverse-width columns: index = i_depth * n_inv_width + j_inv_width.
struct ScalarField2D {
  ParamGrid grid;
  double scale = 1.0;
  double r0 = 1.0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  std::string solver_digest;

  std::size_t index(std::size_t i_depth, std::size_t j_inv_width) const noexcept {
    return i_depth * grid.inv_width.count + j_inv_width;
  }
  double at(std::size_t i_depth, std::size_t j_inv_width) const noexcept {
    return values[index(i_depth, j_inv_width)];
  }
  bool is_valid(std::size_t i_depth, std::size_t j_inv_width) const noexcept {
    return valid[index(i_depth, j_inv_width)] != 0;
  }
  std::size_t valid_count() const noexcept;
  /// Valid values, sorted ascending.
  std::vector<double> sorted_valid_values() const;
  /// Linear-interpolated percentile (0..100) of the valid values.
  double percentile(double pct) const;
  /// Bilinear interpolation at a point; NaN when any corner is invalid or the
  /// point is outside the grid.
  double interpolate(const ParamPoint& p) const;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// values[i][j] = dipole_01(apply_scale((α_j, D_i, r0), s)). Cells with fewer
/// than two bound states, or whose solve fails, are marked invalid. Cells are
/// distributed over `workers` threads; the result does not depend on the count.
ScalarField2D sample_field(const ParamGrid& grid, double s, const SolverConfig& config,
                           unsigned workers = 1, double r0 = 1.0,
                           const ProgressCallback& progress = {});

/// Gradient of a sampled field in raw (α, D) units.
struct GradientField {
  ParamGrid grid;
  std::vector<double> d_inv_width;
  std::vector<double> d_depth;
  std::vector<std::uint8_t> valid;

  std::size_t index(std::size_t i_depth, std::size_t j_inv_width) const noexcept {
    return i_depth * grid.inv_width.count + j_inv_width;
  }
};

/// Central differences where both neighbours are valid, two-point one-sided
/// differences at the boundary or next to invalid cells; invalid where a
/// direction has no valid neighbour or the cell itself is invalid.
GradientField field_gradient(const ScalarField2D& field);

/// Bilinearly interpolated gradient in unit-square coordinates (∂f/∂x, ∂f/∂y).
/// Returns false when the stencil touches an invalid gradient node.
bool interpolate_unit_gradient(const GradientField& gradient, const ParamPoint& p, UnitPoint& out);

enum class Fixture { line, circle };

/// Synthetic fields with closed-form level sets, in unit-square coordinates:
///   line:   F = x + s           (level c: the line x = c - s, unit speed)
///   circle: F = ((x-½)² + (y-½)²) / s²  (level c: radius sqrt(c)·s)
ScalarField2D fixture_field(Fixture kind, const ParamGrid& grid, double s);
/// Level whose contours stay inside the unit square for s in [1, 1.7].
double fixture_default_level(Fixture kind);
Fixture parse_fixture(const std::string& name);
std::string fixture_name(Fixture kind);

/// Field from an arbitrary function of (α, D), every cell valid. Used by tests
/// and fixtures.
ScalarField2D tabulate_field(const ParamGrid& grid, double s,
                             const std::function<double(const ParamPoint&)>& f,
                             std::string digest = "tabulated");

} // namespace morse_lsm
