#pragma once

#include "morse_lsm/param_field.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace morse_lsm {

/// Ordered polyline in (α, D) space. A closed contour joins its last point
/// back to the first; the first point is not repeated.
struct Contour {
  double level = 0.0;
  double scale = 1.0;
  std::vector<ParamPoint> points;
  bool closed = false;

  std::size_t segment_count() const noexcept {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
  }
};

/// All polylines of one field at one level.
struct LevelSet {
  double level = 0.0;
  double scale = 1.0;
  std::vector<Contour> contours;
  /// Set when the level is not strictly inside the valid value range.
  bool out_of_range = false;

  bool empty() const noexcept { return contours.empty(); }
  std::size_t point_count() const noexcept;
};

/// Marching squares with linear interpolation on cell edges. Corners with
/// value >= level count as high. Cells touching invalid samples are skipped.
/// Saddle cells: when the mean of the four corners is >= level the two high
/// corners are joined. Segments are chained into maximal polylines; open
/// polylines run from lower to higher inverse width.
LevelSet extract_contours(const ScalarField2D& field, double level);

/// Natural (open) or periodic (closed) cubic spline through the points,
/// parameterized by cumulative chord length in unit-square coordinates of
/// `frame`, sampled at n_out uniformly spaced parameters. Needs >= 4 points.
Contour resample_spline(const Contour& contour, std::size_t n_out, const ParamGrid& frame);

/// Local linear-interpolation error scale at a point: one eighth of the
/// largest second difference along either axis over the surrounding cell's
/// corners, floored at a rounding-level value. Used to judge level fidelity.
double local_interpolation_bound(const ScalarField2D& field, const ParamPoint& p);

// CSV with header `level,s,contour_id,point_index,a,C`. Closed contours repeat
// their first point as the final row.
std::string contours_to_csv(const std::vector<LevelSet>& sets);
std::vector<LevelSet> contours_from_csv(const std::string& text);
void write_contours_csv(const std::filesystem::path& path, const std::vector<LevelSet>& sets);
std::vector<LevelSet> read_contours_csv(const std::filesystem::path& path);

} // namespace morse_lsm
