#pragma once

// Level-set motion across scales. All geometry (normals, distances, speeds)
// is measured in the unit-square frame of the field's ParamGrid:
//   x = (α - α_min)/(α_max - α_min),  y = (D - D_min)/(D_max - D_min).

#include "morse_lsm/contour.hpp"
#include "morse_lsm/param_field.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace morse_lsm {

struct NormalSample {
  UnitPoint normal; ///< unit length, toward increasing field value
  bool valid = false;
};

/// Unit normals from the bilinearly interpolated field gradient. Points whose
/// stencil touches an invalid gradient, or where the gradient vanishes, are
/// flagged invalid.
std::vector<NormalSample> contour_normals(const Contour& contour, const ScalarField2D& field);
std::vector<NormalSample> contour_normals(const Contour& contour, const GradientField& gradient);

struct SpeedSample {
  ParamPoint base;          ///< point on the contour at s
  UnitPoint normal;         ///< unit normal at the base point
  double signed_distance = 0.0; ///< along +normal to the contour at s + ds
  double speed = 0.0;       ///< signed_distance / ds
  ParamPoint hit;           ///< intersection with the later contour
  UnitPoint hit_normal;     ///< unit normal of the later contour at the hit
  bool excluded = true;     ///< no usable normal, or the ray missed
};

struct SpeedOptions {
  /// Points per polyline after spline resampling; 0 uses the points as given.
  std::size_t resample_points = 200;
};

/// For each point of `from` (resampled), cast the normal ray both ways and
/// take the nearest intersection with any polyline of `to`, which is resampled
/// the same way so that identical contours give zero distance. `field_to`, when
/// given, supplies the normal at the hit; otherwise the hit segment's
/// perpendicular is used. Throws DomainError when either set is empty or
/// ds <= 0.
std::vector<SpeedSample> normal_speed(const LevelSet& from, const LevelSet& to,
                                      const ScalarField2D& field_from, double ds,
                                      const ScalarField2D* field_to = nullptr,
                                      const SpeedOptions& options = {});

struct SpeedStats {
  double mean_signed = 0.0;
  double std_dev = 0.0; ///< sample standard deviation of the signed speeds
  std::size_t n_samples = 0;
  std::size_t n_excluded = 0;
};
SpeedStats speed_stats(std::span<const SpeedSample> samples);

/// One row per consecutive pair (s_i, s_i+1). mean_speed is the magnitude of
/// the mean signed normal speed; the sign (motion along or against the
/// gradient) is kept separately and is not serialized.
struct SpeedRow {
  double scale = 0.0;
  double ds = 0.0;
  double mean_speed = 0.0;
  double std_speed = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_excluded = 0;
  int direction = 0; ///< +1 along the gradient, -1 against, 0 unknown/empty
};

struct SpeedTable {
  std::vector<SpeedRow> rows;
  std::vector<std::vector<SpeedSample>> samples; ///< per row, not serialized
  std::vector<std::string> warnings;

  /// (max - min) / mean over rows with samples.
  double relative_spread() const;
  double mean_of_means() const;
};

/// Fields must be in ascending scale order. Rows whose contours are empty are
/// reported with zero samples and a warning.
SpeedTable average_speed_table(std::span<const ScalarField2D> fields, double level,
                               const SpeedOptions& options = {});

struct ParallelismStats {
  double mean_degrees = 0.0;
  double max_degrees = 0.0;
  std::size_t matched = 0;
};

/// Angle between the normals at the two ends of every matched ray. Throws
/// DomainError when no sample is matched.
ParallelismStats parallelism_metric(std::span<const std::vector<SpeedSample>> sample_sets);
ParallelismStats parallelism_metric(std::span<const SpeedSample> samples);

struct AdvectedContour {
  Contour contour;              ///< moved points that stayed inside the rectangle
  std::vector<std::uint8_t> clipped; ///< per input point: left the rectangle
  std::vector<std::uint8_t> no_normal; ///< per input point: normal unavailable
};

/// Moves each point by signed_speed·ds along its unit normal. Points leaving the
/// rectangle are clipped to it and flagged; flagged points are left out of
/// the returned contour.
AdvectedContour advect_contour(const Contour& contour, double signed_speed, double ds,
                               const ScalarField2D& field);

struct AdvectionRow {
  double scale = 0.0;
  double ds = 0.0;
  double signed_speed = 0.0; ///< mean signed normal speed used for the move
  double std_speed = 0.0;
  double hausdorff = 0.0;    ///< predicted -> recomputed contour, unit square
  std::size_t n_points = 0;  ///< predicted points kept
  std::size_t n_clipped = 0; ///< points dropped: left the rectangle or no normal

  /// 2 · std · ds, the consistency bound for `hausdorff`.
  double bound() const noexcept { return 2.0 * std_speed * ds; }
};

/// For each row of `table`, advects the (resampled) contour at s by the row's
/// mean signed speed and compares it with the contour extracted at s + ds.
/// Throws DomainError when a contour is empty or a row has no samples.
std::vector<AdvectionRow> advection_report(std::span<const ScalarField2D> fields, double level,
                                           const SpeedTable& table,
                                           const SpeedOptions& options = {});

/// Directed Hausdorff distance in unit-square coordinates: the largest
/// distance from a point of `from` to the nearest segment of `to`.
double hausdorff_distance(const Contour& from, const LevelSet& to, const ParamGrid& frame);

/// Open polylines whose inverse width changes strictly monotonically.
bool is_monotone_in_inv_width(const Contour& contour);
/// Largest turning angle between consecutive segments, in degrees, in the
/// unit-square frame.
double max_turning_angle(const Contour& contour, const ParamGrid& frame);

// CSV with header `s,ds,mean_speed,std_speed,n_samples,n_excluded`.
std::string speed_table_to_csv(const SpeedTable& table);
SpeedTable speed_table_from_csv(const std::string& text);
void write_speed_table_csv(const std::filesystem::path& path, const SpeedTable& table);
SpeedTable read_speed_table_csv(const std::filesystem::path& path);

} // namespace morse_lsm
