#include "morse_lsm/contour.hpp"

#include "morse_lsm/errors.hpp"
#include "morse_lsm/field_io.hpp"
#include "morse_lsm/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace morse_lsm {

std::size_t LevelSet::point_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : contours) n += c.points.size();
  return n;
}

namespace {

constexpr int no_segment = -1;

struct Segment {
  std::size_t edge_a;
  std::size_t edge_b;
};

class EdgeIndex {
public:
  explicit EdgeIndex(const ParamGrid& grid)
      : na_(grid.inv_width.count), nc_(grid.depth.count), horizontal_(nc_ * (na_ - 1)) {}

  std::size_t horizontal(std::size_t i, std::size_t j) const { return i * (na_ - 1) + j; }
  std::size_t vertical(std::size_t i, std::size_t j) const { return horizontal_ + i * na_ + j; }
  std::size_t total() const { return horizontal_ + (nc_ - 1) * na_; }
  bool is_horizontal(std::size_t e) const { return e < horizontal_; }
  /// (row, column) of the edge's first endpoint.
  std::pair<std::size_t, std::size_t> origin(std::size_t e) const {
    if (is_horizontal(e)) return {e / (na_ - 1), e % (na_ - 1)};
    const std::size_t v = e - horizontal_;
    return {v / na_, v % na_};
  }

private:
  std::size_t na_;
  std::size_t nc_;
  std::size_t horizontal_;
};

ParamPoint crossing(const ScalarField2D& field, const EdgeIndex& edges, std::size_t e, double level) {
  const auto [i, j] = edges.origin(e);
  const auto& g = field.grid;
  if (edges.is_horizontal(e)) {
    const double f0 = field.at(i, j);
    const double f1 = field.at(i, j + 1);
    const double t = (level - f0) / (f1 - f0);
    return {g.inv_width.at(j) + t * g.inv_width.step(), g.depth.at(i)};
  }
  const double f0 = field.at(i, j);
  const double f1 = field.at(i + 1, j);
  const double t = (level - f0) / (f1 - f0);
  return {g.inv_width.at(j), g.depth.at(i) + t * g.depth.step()};
}

// Points closer than this in the unit square count as repeats. Crossings that
// land on a grid node are produced by two edges and agree only to rounding.
constexpr double repeat_distance = 1e-10;

void drop_repeats(Contour& c, const ParamGrid& frame) {
  auto same = [&](const ParamPoint& a, const ParamPoint& b) {
    const auto u = frame.to_unit(a), v = frame.to_unit(b);
    return std::hypot(u.x - v.x, u.y - v.y) <= repeat_distance;
  };
  auto& p = c.points;
  p.erase(std::unique(p.begin(), p.end(), same), p.end());
  if (c.closed && p.size() > 1 && same(p.front(), p.back())) p.pop_back();
}

} // namespace

LevelSet extract_contours(const ScalarField2D& field, double level) {
  const auto& grid = field.grid;
  grid.validate();
  LevelSet result;
  result.level = level;
  result.scale = field.scale;

  const auto sorted = field.sorted_valid_values();
  if (sorted.empty() || !(level > sorted.front() && level < sorted.back())) {
    result.out_of_range = true;
    return result;
  }

  const EdgeIndex edges(grid);
  std::vector<Segment> segments;
  const std::size_t na = grid.inv_width.count;
  const std::size_t nc = grid.depth.count;

  for (std::size_t i = 0; i + 1 < nc; ++i) {
    for (std::size_t j = 0; j + 1 < na; ++j) {
      if (!field.is_valid(i, j) || !field.is_valid(i, j + 1) || !field.is_valid(i + 1, j + 1) ||
          !field.is_valid(i + 1, j))
        continue;
      const std::array<double, 4> corner{field.at(i, j), field.at(i, j + 1), field.at(i + 1, j + 1),
                                         field.at(i + 1, j)};
      int code = 0;
      for (int k = 0; k < 4; ++k)
        if (corner[k] >= level) code |= 1 << k;
      if (code == 0 || code == 15) continue;

      // bottom, right, top, left
      const std::array<std::size_t, 4> e{edges.horizontal(i, j), edges.vertical(i, j + 1),
                                         edges.horizontal(i + 1, j), edges.vertical(i, j)};
      auto add = [&](int a, int b) { segments.push_back({e[a], e[b]}); };
      const bool centre_high = 0.25 * (corner[0] + corner[1] + corner[2] + corner[3]) >= level;
      switch (code) {
      case 1: case 14: add(3, 0); break;
      case 2: case 13: add(0, 1); break;
      case 3: case 12: add(3, 1); break;
      case 4: case 11: add(1, 2); break;
      case 6: case 9:  add(0, 2); break;
      case 7: case 8:  add(3, 2); break;
      case 5:
        if (centre_high) { add(0, 1); add(2, 3); }
        else { add(3, 0); add(1, 2); }
        break;
      case 10:
        if (centre_high) { add(3, 0); add(1, 2); }
        else { add(0, 1); add(2, 3); }
        break;
      default: break;
      }
    }
  }

  // edge -> the (at most two) segments touching it
  std::vector<std::array<int, 2>> touching(edges.total(), {no_segment, no_segment});
  auto attach = [&](std::size_t edge, int seg) {
    auto& slot = touching[edge];
    (slot[0] == no_segment ? slot[0] : slot[1]) = seg;
  };
  for (std::size_t s = 0; s < segments.size(); ++s) {
    attach(segments[s].edge_a, static_cast<int>(s));
    attach(segments[s].edge_b, static_cast<int>(s));
  }

  std::vector<char> used(segments.size(), 0);
  auto walk = [&](std::size_t start_edge, int seg, bool closed) {
    Contour c;
    c.level = level;
    c.scale = field.scale;
    c.closed = closed;
    std::size_t edge = start_edge;
    c.points.push_back(crossing(field, edges, edge, level));
    while (seg != no_segment && !used[seg]) {
      used[seg] = 1;
      const auto& s = segments[seg];
      edge = s.edge_a == edge ? s.edge_b : s.edge_a;
      if (closed && edge == start_edge) break;
      c.points.push_back(crossing(field, edges, edge, level));
      const auto& slot = touching[edge];
      seg = slot[0] == seg ? slot[1] : slot[0];
    }
    drop_repeats(c, grid);
    if (!c.closed && c.points.size() > 1) {
      const auto& a = c.points.front();
      const auto& b = c.points.back();
      if (a.inv_width > b.inv_width || (a.inv_width == b.inv_width && a.depth > b.depth))
        std::reverse(c.points.begin(), c.points.end());
    }
    if (c.points.size() >= 2) result.contours.push_back(std::move(c));
  };

  // open chains start at edges touched by a single segment
  for (std::size_t edge = 0; edge < touching.size(); ++edge) {
    const auto& slot = touching[edge];
    if (slot[0] != no_segment && slot[1] == no_segment && !used[slot[0]]) walk(edge, slot[0], false);
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(segments[s].edge_a, static_cast<int>(s), true);

  return result;
}

Contour resample_spline(const Contour& contour, std::size_t n_out, const ParamGrid& frame) {
  const std::size_t n = contour.points.size();
  if (n < 4) throw DomainError("resample_spline: need at least 4 points");
  if (n_out < 2) throw DomainError("resample_spline: need at least 2 output points");

  std::vector<double> t(n), x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = frame.to_unit(contour.points[i]);
    x[i] = u.x;
    y[i] = u.y;
    t[i] = i == 0 ? 0.0 : t[i - 1] + std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  }

  Contour out;
  out.level = contour.level;
  out.scale = contour.scale;
  out.closed = contour.closed;
  out.points.reserve(n_out);
  if (contour.closed) {
    const double closing = std::hypot(x[0] - x[n - 1], y[0] - y[n - 1]);
    const auto sx = CubicSpline::periodic(t, x, closing);
    const auto sy = CubicSpline::periodic(t, y, closing);
    const double period = sx.period();
    for (std::size_t k = 0; k < n_out; ++k) {
      const double tk = period * static_cast<double>(k) / static_cast<double>(n_out);
      out.points.push_back(frame.from_unit({sx(tk), sy(tk)}));
    }
  } else {
    const double length = t.back();
    const auto sx = CubicSpline::natural(t, x);
    const auto sy = CubicSpline::natural(t, y);
    for (std::size_t k = 0; k < n_out; ++k) {
      const double tk = k + 1 == n_out ? length
                                       : length * static_cast<double>(k) / static_cast<double>(n_out - 1);
      out.points.push_back(frame.from_unit({sx(tk), sy(tk)}));
    }
  }
  drop_repeats(out, frame);
  return out;
}

double local_interpolation_bound(const ScalarField2D& field, const ParamPoint& p) {
  const auto& g = field.grid;
  const std::size_t na = g.inv_width.count;
  const std::size_t nc = g.depth.count;
  const double fx = std::clamp((p.inv_width - g.inv_width.min) / g.inv_width.step(), 0.0,
                               static_cast<double>(na - 1));
  const double fy = std::clamp((p.depth - g.depth.min) / g.depth.step(), 0.0,
                               static_cast<double>(nc - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(fx), na - 2);
  const std::size_t i = std::min(static_cast<std::size_t>(fy), nc - 2);

  double along_a = 0.0;
  double along_c = 0.0;
  double magnitude = 0.0;
  for (std::size_t ii = i; ii <= i + 1; ++ii) {
    for (std::size_t jj = j; jj <= j + 1; ++jj) {
      if (!field.is_valid(ii, jj)) continue;
      const double f = field.at(ii, jj);
      magnitude = std::max(magnitude, std::fabs(f));
      if (jj > 0 && jj + 1 < na && field.is_valid(ii, jj - 1) && field.is_valid(ii, jj + 1))
        along_a = std::max(along_a, std::fabs(field.at(ii, jj - 1) - 2.0 * f + field.at(ii, jj + 1)));
      if (ii > 0 && ii + 1 < nc && field.is_valid(ii - 1, jj) && field.is_valid(ii + 1, jj))
        along_c = std::max(along_c, std::fabs(field.at(ii - 1, jj) - 2.0 * f + field.at(ii + 1, jj)));
    }
  }
  double twist = 0.0;
  if (field.is_valid(i, j) && field.is_valid(i, j + 1) && field.is_valid(i + 1, j) &&
      field.is_valid(i + 1, j + 1))
    twist = std::fabs(field.at(i, j) - field.at(i, j + 1) - field.at(i + 1, j) + field.at(i + 1, j + 1));
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, magnitude);
  return std::max((along_a + along_c + twist) / 8.0, rounding);
}

std::string contours_to_csv(const std::vector<LevelSet>& sets) {
  std::string out = "level,s,contour_id,point_index,a,C\n";
  char line[160];
  for (const auto& set : sets) {
    for (std::size_t id = 0; id < set.contours.size(); ++id) {
      const auto& c = set.contours[id];
      const std::size_t rows = c.points.size() + (c.closed ? 1 : 0);
      for (std::size_t k = 0; k < rows; ++k) {
        const auto& p = c.points[k % c.points.size()];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%zu,%zu,%.17g,%.17g\n", set.level, set.scale,
                      id, k, p.inv_width, p.depth);
        out += line;
      }
    }
  }
  return out;
}

std::vector<LevelSet> contours_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "level,s,contour_id,point_index,a,C")
    throw LoadError("contour CSV: missing or unexpected header");

  std::vector<LevelSet> sets;
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
        throw LoadError("contour CSV: malformed row " + std::to_string(line_no));
      cursor = end + 1;
    }
    const double level = cells[0];
    const double scale = cells[1];
    const auto id = static_cast<std::size_t>(cells[2]);
    const auto index = static_cast<std::size_t>(cells[3]);
    if (sets.empty() || sets.back().level != level || sets.back().scale != scale) {
      LevelSet s;
      s.level = level;
      s.scale = scale;
      sets.push_back(std::move(s));
    }
    auto& set = sets.back();
    if (id == set.contours.size()) {
      Contour c;
      c.level = level;
      c.scale = scale;
      set.contours.push_back(std::move(c));
    } else if (id + 1 != set.contours.size()) {
      throw LoadError("contour CSV: contour ids out of order at row " + std::to_string(line_no));
    }
    auto& c = set.contours.back();
    if (index != c.points.size())
      throw LoadError("contour CSV: point indices out of order at row " + std::to_string(line_no));
    c.points.push_back({cells[4], cells[5]});
  }
  for (auto& set : sets) {
    for (auto& c : set.contours) {
      if (c.points.size() > 2 && c.points.front() == c.points.back()) {
        c.points.pop_back();
        c.closed = true;
      }
    }
  }
  return sets;
}

void write_contours_csv(const std::filesystem::path& path, const std::vector<LevelSet>& sets) {
  write_file_atomic(path, contours_to_csv(sets));
}

std::vector<LevelSet> read_contours_csv(const std::filesystem::path& path) {
  return contours_from_csv(read_file(path));
}

} // namespace morse_lsm
