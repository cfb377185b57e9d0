#include "morse_lsm/levelset.hpp"

#include "morse_lsm/errors.hpp"
#include "morse_lsm/field_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

namespace morse_lsm {

namespace {

double cross(const UnitPoint& a, const UnitPoint& b) { return a.x * b.y - a.y * b.x; }
double dot(const UnitPoint& a, const UnitPoint& b) { return a.x * b.x + a.y * b.y; }
UnitPoint minus(const UnitPoint& a, const UnitPoint& b) { return {a.x - b.x, a.y - b.y}; }
double length(const UnitPoint& a) { return std::hypot(a.x, a.y); }

bool unit_normal(const GradientField& gradient, const ParamPoint& p, UnitPoint& out) {
  UnitPoint g;
  if (!interpolate_unit_gradient(gradient, p, g)) return false;
  const double norm = length(g);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  out = {g.x / norm, g.y / norm};
  return true;
}

struct UnitSegment {
  UnitPoint start;
  UnitPoint end;
};

void append_segments(std::vector<UnitSegment>& out, const Contour& c, const ParamGrid& frame) {
  const std::size_t n = c.points.size();
  for (std::size_t k = 0; k < c.segment_count(); ++k)
    out.push_back({frame.to_unit(c.points[k]), frame.to_unit(c.points[(k + 1) % n])});
}

std::vector<UnitSegment> unit_segments(const LevelSet& set, const ParamGrid& frame) {
  std::vector<UnitSegment> out;
  for (const auto& c : set.contours) append_segments(out, c, frame);
  return out;
}

double point_segment_distance(const UnitPoint& p, const UnitSegment& s) {
  const UnitPoint e = minus(s.end, s.start);
  const double len2 = dot(e, e);
  double t = len2 > 0.0 ? dot(minus(p, s.start), e) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (s.start.x + t * e.x), p.y - (s.start.y + t * e.y));
}

Contour resampled(const Contour& c, const ParamGrid& frame, const SpeedOptions& options) {
  if (options.resample_points > 0 && c.points.size() >= 4)
    return resample_spline(c, options.resample_points, frame);
  return c;
}

} // namespace

std::vector<NormalSample> contour_normals(const Contour& contour, const GradientField& gradient) {
  std::vector<NormalSample> out(contour.points.size());
  for (std::size_t k = 0; k < contour.points.size(); ++k)
    out[k].valid = unit_normal(gradient, contour.points[k], out[k].normal);
  return out;
}

std::vector<NormalSample> contour_normals(const Contour& contour, const ScalarField2D& field) {
  return contour_normals(contour, field_gradient(field));
}

std::vector<SpeedSample> normal_speed(const LevelSet& from, const LevelSet& to,
                                      const ScalarField2D& field_from, double ds,
                                      const ScalarField2D* field_to, const SpeedOptions& options) {
  if (from.empty() || to.empty()) throw DomainError("normal_speed: empty contour set");
  if (!(ds > 0.0)) throw DomainError("normal_speed: ds must be positive");
  const ParamGrid& frame = field_from.grid;
  const auto gradient_from = field_gradient(field_from);
  std::optional<GradientField> gradient_to;
  if (field_to) gradient_to = field_gradient(*field_to);
  // the later contour gets the same resampling as the earlier one
  std::vector<UnitSegment> targets;
  for (const auto& c : to.contours) append_segments(targets, resampled(c, frame, options), frame);

  std::vector<SpeedSample> samples;
  for (const auto& contour : from.contours) {
    for (const auto& base : resampled(contour, frame, options).points) {
      SpeedSample sample;
      sample.base = base;
      if (!unit_normal(gradient_from, base, sample.normal)) {
        samples.push_back(sample);
        continue;
      }
      const UnitPoint p = frame.to_unit(base);
      const UnitPoint& d = sample.normal;
      double best_t = std::numeric_limits<double>::infinity();
      const UnitSegment* best_segment = nullptr;
      for (const auto& seg : targets) {
        const UnitPoint e = minus(seg.end, seg.start);
        const double denom = cross(d, e);
        if (std::fabs(denom) <= 1e-14 * length(e)) continue;
        const UnitPoint w = minus(seg.start, p);
        const double t = cross(w, e) / denom;
        const double u = cross(w, d) / denom;
        if (u < -1e-12 || u > 1.0 + 1e-12) continue;
        if (std::fabs(t) < std::fabs(best_t)) {
          best_t = t;
          best_segment = &seg;
        }
      }
      if (best_segment) {
        const UnitPoint hit{p.x + best_t * d.x, p.y + best_t * d.y};
        sample.signed_distance = best_t;
        sample.speed = best_t / ds;
        sample.hit = frame.from_unit(hit);
        if (!(gradient_to && unit_normal(*gradient_to, sample.hit, sample.hit_normal))) {
          const UnitPoint e = minus(best_segment->end, best_segment->start);
          const double len = length(e);
          UnitPoint perp{-e.y / len, e.x / len};
          if (dot(perp, d) < 0.0) perp = {-perp.x, -perp.y};
          sample.hit_normal = perp;
        }
        sample.excluded = false;
      }
      samples.push_back(sample);
    }
  }
  return samples;
}

SpeedStats speed_stats(std::span<const SpeedSample> samples) {
  SpeedStats stats;
  double sum = 0.0;
  for (const auto& s : samples) {
    if (s.excluded) {
      ++stats.n_excluded;
      continue;
    }
    ++stats.n_samples;
    sum += s.speed;
  }
  if (stats.n_samples == 0) return stats;
  stats.mean_signed = sum / static_cast<double>(stats.n_samples);
  if (stats.n_samples > 1) {
    double sq = 0.0;
    for (const auto& s : samples)
      if (!s.excluded) sq += (s.speed - stats.mean_signed) * (s.speed - stats.mean_signed);
    stats.std_dev = std::sqrt(sq / static_cast<double>(stats.n_samples - 1));
  }
  return stats;
}

double SpeedTable::relative_spread() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : rows) {
    if (r.n_samples == 0) continue;
    lo = std::min(lo, r.mean_speed);
    hi = std::max(hi, r.mean_speed);
  }
  const double mean = mean_of_means();
  if (!(mean > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (hi - lo) / mean;
}

double SpeedTable::mean_of_means() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.n_samples == 0) continue;
    sum += r.mean_speed;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

SpeedTable average_speed_table(std::span<const ScalarField2D> fields, double level,
                               const SpeedOptions& options) {
  for (std::size_t i = 1; i < fields.size(); ++i)
    if (!(fields[i].scale > fields[i - 1].scale))
      throw DomainError("average_speed_table: fields must be in ascending scale order");

  SpeedTable table;
  for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
    SpeedRow row;
    row.scale = fields[i].scale;
    row.ds = fields[i + 1].scale - fields[i].scale;
    const auto from = extract_contours(fields[i], level);
    const auto to = extract_contours(fields[i + 1], level);
    std::vector<SpeedSample> samples;
    if (from.empty() || to.empty()) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "no contour at level %.6g for s = %.6g", level,
                    from.empty() ? fields[i].scale : fields[i + 1].scale);
      table.warnings.emplace_back(msg);
    } else {
      samples = normal_speed(from, to, fields[i], row.ds, &fields[i + 1], options);
      const auto stats = speed_stats(samples);
      row.mean_speed = std::fabs(stats.mean_signed);
      row.std_speed = stats.std_dev;
      row.n_samples = stats.n_samples;
      row.n_excluded = stats.n_excluded;
      row.direction = stats.n_samples == 0 ? 0 : (stats.mean_signed < 0.0 ? -1 : 1);
      if (stats.n_samples == 0) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "no matched speed samples for s = %.6g", row.scale);
        table.warnings.emplace_back(msg);
      }
    }
    table.rows.push_back(row);
    table.samples.push_back(std::move(samples));
  }
  return table;
}

ParallelismStats parallelism_metric(std::span<const std::vector<SpeedSample>> sample_sets) {
  ParallelismStats stats;
  double sum = 0.0;
  for (const auto& set : sample_sets) {
    for (const auto& s : set) {
      if (s.excluded) continue;
      const double c = std::clamp(dot(s.normal, s.hit_normal), -1.0, 1.0);
      const double angle = std::acos(c) * 180.0 / std::numbers::pi;
      sum += angle;
      stats.max_degrees = std::max(stats.max_degrees, angle);
      ++stats.matched;
    }
  }
  if (stats.matched == 0) throw DomainError("parallelism_metric: no matched points");
  stats.mean_degrees = sum / static_cast<double>(stats.matched);
  return stats;
}

ParallelismStats parallelism_metric(std::span<const SpeedSample> samples) {
  const std::vector<std::vector<SpeedSample>> one{std::vector<SpeedSample>(samples.begin(), samples.end())};
  return parallelism_metric(std::span<const std::vector<SpeedSample>>(one));
}

AdvectedContour advect_contour(const Contour& contour, double signed_speed, double ds,
                               const ScalarField2D& field) {
  const auto& frame = field.grid;
  const auto normals = contour_normals(contour, field);
  AdvectedContour out;
  out.contour.level = contour.level;
  out.contour.scale = contour.scale + ds;
  out.contour.closed = contour.closed;
  out.clipped.assign(contour.points.size(), 0);
  out.no_normal.assign(contour.points.size(), 0);
  const double step = signed_speed * ds;
  for (std::size_t k = 0; k < contour.points.size(); ++k) {
    if (!normals[k].valid) {
      out.no_normal[k] = 1;
      continue;
    }
    const UnitPoint p = frame.to_unit(contour.points[k]);
    UnitPoint moved{p.x + step * normals[k].normal.x, p.y + step * normals[k].normal.y};
    constexpr double slack = 1e-12;
    if (moved.x < -slack || moved.x > 1.0 + slack || moved.y < -slack || moved.y > 1.0 + slack) {
      out.clipped[k] = 1;
      continue;
    }
    moved.x = std::clamp(moved.x, 0.0, 1.0);
    moved.y = std::clamp(moved.y, 0.0, 1.0);
    out.contour.points.push_back(step == 0.0 ? contour.points[k] : frame.from_unit(moved));
  }
  return out;
}

double hausdorff_distance(const Contour& from, const LevelSet& to, const ParamGrid& frame) {
  const auto targets = unit_segments(to, frame);
  if (targets.empty()) throw DomainError("hausdorff_distance: target has no segments");
  if (from.points.empty()) throw DomainError("hausdorff_distance: source has no points");
  double worst = 0.0;
  for (const auto& p : from.points) {
    const UnitPoint u = frame.to_unit(p);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& seg : targets) nearest = std::min(nearest, point_segment_distance(u, seg));
    worst = std::max(worst, nearest);
  }
  return worst;
}

std::vector<AdvectionRow> advection_report(std::span<const ScalarField2D> fields, double level,
                                           const SpeedTable& table, const SpeedOptions& options) {
  if (table.rows.size() + 1 != fields.size())
    throw DomainError("advection_report: speed table does not match the field list");
  std::vector<AdvectionRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& speed = table.rows[i];
    if (speed.n_samples == 0)
      throw DomainError("advection_report: no speed samples for s = " + std::to_string(speed.scale));
    const auto from = extract_contours(fields[i], level);
    const auto to = extract_contours(fields[i + 1], level);
    if (from.empty() || to.empty())
      throw DomainError("advection_report: empty contour at level " + std::to_string(level));

    AdvectionRow row;
    row.scale = speed.scale;
    row.ds = speed.ds;
    row.signed_speed = speed.direction * speed.mean_speed;
    row.std_speed = speed.std_speed;
    for (const auto& c : from.contours) {
      const Contour base = options.resample_points > 0 && c.points.size() >= 4
                               ? resample_spline(c, options.resample_points, fields[i].grid)
                               : c;
      const auto moved = advect_contour(base, row.signed_speed, row.ds, fields[i]);
      row.n_points += moved.contour.points.size();
      row.n_clipped += base.points.size() - moved.contour.points.size();
      if (!moved.contour.points.empty())
        row.hausdorff =
            std::max(row.hausdorff, hausdorff_distance(moved.contour, to, fields[i].grid));
    }
    rows.push_back(row);
  }
  return rows;
}

bool is_monotone_in_inv_width(const Contour& contour) {
  if (contour.closed || contour.points.size() < 2) return false;
  const double first = contour.points[1].inv_width - contour.points[0].inv_width;
  if (first == 0.0) return false;
  for (std::size_t k = 1; k < contour.points.size(); ++k) {
    const double step = contour.points[k].inv_width - contour.points[k - 1].inv_width;
    if (!(step * first > 0.0)) return false;
  }
  return true;
}

double max_turning_angle(const Contour& contour, const ParamGrid& frame) {
  const std::size_t n = contour.points.size();
  double worst = 0.0;
  const std::size_t corners = contour.closed ? n : (n >= 2 ? n - 2 : 0);
  for (std::size_t k = 0; k < corners; ++k) {
    const UnitPoint a = frame.to_unit(contour.points[k]);
    const UnitPoint b = frame.to_unit(contour.points[(k + 1) % n]);
    const UnitPoint c = frame.to_unit(contour.points[(k + 2) % n]);
    const UnitPoint u = minus(b, a);
    const UnitPoint v = minus(c, b);
    const double denom = length(u) * length(v);
    if (!(denom > 0.0)) continue;
    const double angle = std::acos(std::clamp(dot(u, v) / denom, -1.0, 1.0)) * 180.0 / std::numbers::pi;
    worst = std::max(worst, angle);
  }
  return worst;
}

std::string speed_table_to_csv(const SpeedTable& table) {
  std::string out = "s,ds,mean_speed,std_speed,n_samples,n_excluded\n";
  char line[160];
  for (const auto& r : table.rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%zu,%zu\n", r.scale, r.ds,
                  r.mean_speed, r.std_speed, r.n_samples, r.n_excluded);
    out += line;
  }
  return out;
}

SpeedTable speed_table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "s,ds,mean_speed,std_speed,n_samples,n_excluded")
    throw LoadError("speed table CSV: missing or unexpected header");
  SpeedTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 6> cells{};
    const char* cursor = line.c_str();
    for (std::size_t k = 0; k < cells.size(); ++k) {
      char* end = nullptr;
      cells[k] = std::strtod(cursor, &end);
      if (end == cursor || (k + 1 < cells.size() ? *end != ',' : *end != '\0'))
        throw LoadError("speed table CSV: malformed row " + std::to_string(line_no));
      cursor = end + 1;
    }
    SpeedRow r;
    r.scale = cells[0];
    r.ds = cells[1];
    r.mean_speed = cells[2];
    r.std_speed = cells[3];
    r.n_samples = static_cast<std::size_t>(cells[4]);
    r.n_excluded = static_cast<std::size_t>(cells[5]);
    table.rows.push_back(r);
    table.samples.emplace_back();
  }
  return table;
}

void write_speed_table_csv(const std::filesystem::path& path, const SpeedTable& table) {
  write_file_atomic(path, speed_table_to_csv(table));
}

SpeedTable read_speed_table_csv(const std::filesystem::path& path) {
  return speed_table_from_csv(read_file(path));
}

} // namespace morse_lsm
