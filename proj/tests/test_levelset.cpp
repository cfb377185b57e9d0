#include "morse_lsm/contour.hpp"
#include "morse_lsm/errors.hpp"
#include "morse_lsm/levelset.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace morse_lsm;

namespace {

ParamGrid square(std::size_t n) { return ParamGrid{{0.8, 2.0, n}, {12.0, 26.0, n}}; }

// Field defined in unit coordinates of the grid.
template <class F> ScalarField2D unit_field(const ParamGrid& g, double s, F f) {
  return tabulate_field(g, s, [g, f](const ParamPoint& p) {
    const auto u = g.to_unit(p);
    return f(u.x, u.y);
  });
}

double dot(const UnitPoint& a, const UnitPoint& b) { return a.x * b.x + a.y * b.y; }

} // namespace

TEST_CASE("normals of linear, circle and constant fields") {
  const auto g = square(41);
  const auto lin = unit_field(g, 1.0, [](double x, double) { return x; });
  const auto line = extract_contours(lin, 0.37);
  REQUIRE(line.contours.size() == 1);
  for (const auto& n : contour_normals(line.contours[0], lin)) {
    REQUIRE(n.valid);
    CHECK(n.normal.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(n.normal.y) < 1e-12);
  }

  const auto circ = unit_field(g, 1.0, [](double x, double y) {
    return (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
  });
  const auto ring = extract_contours(circ, 0.09);
  REQUIRE(ring.contours.size() == 1);
  const auto normals = contour_normals(ring.contours[0], circ);
  for (std::size_t k = 0; k < normals.size(); ++k) {
    REQUIRE(normals[k].valid);
    const auto u = g.to_unit(ring.contours[0].points[k]);
    const double r = std::hypot(u.x - 0.5, u.y - 0.5);
    const double c = dot(normals[k].normal, {(u.x - 0.5) / r, (u.y - 0.5) / r});
    CHECK(std::acos(std::min(1.0, c)) * 180.0 / std::numbers::pi < 1.0);
  }

  const auto flat = unit_field(g, 1.0, [](double, double) { return 1.0; });
  for (const auto& n : contour_normals(line.contours[0], flat)) CHECK_FALSE(n.valid);
}

TEST_CASE("normal speed: identity and translation") {
  const auto g = square(41);
  const auto f1 = unit_field(g, 1.0, [](double x, double y) { return x + 0.3 * y; });
  const auto from = extract_contours(f1, 0.6);

  const auto same = normal_speed(from, from, f1, 0.1, &f1);
  std::size_t used = 0;
  for (const auto& s : same)
    if (!s.excluded) {
      ++used;
      CHECK(std::fabs(s.speed) < 1e-12);
    }
  CHECK(used > 100);

  // translate by delta along the unit normal of f1
  const double delta = 0.02;
  const double norm = std::hypot(1.0, 0.3);
  const auto f2 = unit_field(g, 1.1, [=](double x, double y) {
    return (x - delta / norm) + 0.3 * (y - 0.3 * delta / norm);
  });
  const auto to = extract_contours(f2, 0.6);
  const auto moved = normal_speed(from, to, f1, 0.1, &f2);
  used = 0;
  for (const auto& s : moved) {
    if (s.excluded) continue;
    ++used;
    CHECK(std::fabs(s.speed - delta / 0.1) < 1e-9);
    // the ray follows the gradient, so it is perpendicular to the straight contour
    const auto t0 = g.to_unit(from.contours[0].points.front());
    const auto t1 = g.to_unit(from.contours[0].points.back());
    const double len = std::hypot(t1.x - t0.x, t1.y - t0.y);
    CHECK(std::fabs(dot(s.normal, {(t1.x - t0.x) / len, (t1.y - t0.y) / len})) < 1e-9);
  }
  CHECK(used > 100);

  CHECK_THROWS_AS(normal_speed(from, LevelSet{}, f1, 0.1), DomainError);
  CHECK_THROWS_AS(normal_speed(from, to, f1, 0.0), DomainError);
}

TEST_CASE("rays are parallel to the gradient normal") {
  const ParamGrid g;
  const auto a = fixture_field(Fixture::circle, g, 1.0);
  const auto b = fixture_field(Fixture::circle, g, 1.2);
  const double level = fixture_default_level(Fixture::circle);
  const auto samples = normal_speed(extract_contours(a, level), extract_contours(b, level), a, 0.2, &b);
  for (const auto& s : samples) {
    REQUIRE_FALSE(s.excluded);
    const auto p = g.to_unit(s.base), q = g.to_unit(s.hit);
    const UnitPoint ray{q.x - p.x, q.y - p.y};
    const double len = std::hypot(ray.x, ray.y);
    CHECK(std::fabs(ray.x * s.normal.y - ray.y * s.normal.x) < 1e-9 * len);
    // an outward-moving ring: every signed distance positive
    CHECK(s.signed_distance > 0.0);
  }
}

TEST_CASE("reciprocity on near-parallel contours") {
  const ParamGrid g;
  const auto a = fixture_field(Fixture::circle, g, 1.0);
  const auto b = fixture_field(Fixture::circle, g, 1.1);
  const double level = fixture_default_level(Fixture::circle);
  const auto ca = extract_contours(a, level), cb = extract_contours(b, level);
  const auto fwd = speed_stats(normal_speed(ca, cb, a, 0.1, &b));
  const auto back = speed_stats(normal_speed(cb, ca, b, 0.1, &a));
  CHECK(std::fabs(std::fabs(fwd.mean_signed) - std::fabs(back.mean_signed)) <
        0.1 * std::fabs(fwd.mean_signed));
  CHECK(fwd.mean_signed * back.mean_signed < 0.0);
}

TEST_CASE("speed stats") {
  std::vector<SpeedSample> s(4);
  s[0].speed = 1.0;
  s[1].speed = 3.0;
  s[2].speed = 100.0;
  s[3].speed = 2.0;
  for (auto& x : s) x.excluded = false;
  s[2].excluded = true;
  const auto st = speed_stats(s);
  CHECK(st.n_samples == 3);
  CHECK(st.n_excluded == 1);
  CHECK(st.mean_signed == doctest::Approx(2.0));
  CHECK(st.std_dev == doctest::Approx(1.0));
}

TEST_CASE("speed table: identical fields, moving line, empty rows") {
  const ParamGrid g;
  std::vector<ScalarField2D> same;
  for (double s : {1.0, 1.1, 1.3})
    same.push_back(unit_field(g, s, [](double x, double y) { return x + 0.2 * std::sin(3 * y); }));
  const auto zero = average_speed_table(same, 0.5);
  REQUIRE(zero.rows.size() == 2);
  for (const auto& r : zero.rows) {
    CHECK(r.n_samples > 0);
    CHECK(r.mean_speed < 1e-12);
  }

  std::vector<ScalarField2D> line;
  const std::vector<double> scales{1.0, 1.1, 1.2, 1.5, 1.7};
  for (double s : scales) line.push_back(fixture_field(Fixture::line, g, s));
  const auto table = average_speed_table(line, fixture_default_level(Fixture::line));
  REQUIRE(table.rows.size() == 4);
  const std::vector<double> ds{0.1, 0.1, 0.3, 0.2};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(table.rows[k].scale == scales[k]);
    CHECK(table.rows[k].ds == doctest::Approx(ds[k]).epsilon(1e-12));
    CHECK(table.rows[k].mean_speed == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(table.rows[k].n_samples == 200);
    CHECK(table.rows[k].direction == -1);
  }
  CHECK(table.relative_spread() < 1e-9);
  CHECK(table.mean_of_means() == doctest::Approx(1.0));
  CHECK(table.warnings.empty());

  // level 1.6: x = 1.6 - s leaves the square before s = 1.7
  const auto partial = average_speed_table(line, 1.6);
  CHECK(partial.rows[0].n_samples > 0);
  CHECK(partial.rows[3].n_samples == 0);
  CHECK_FALSE(partial.warnings.empty());

  std::vector<ScalarField2D> backwards{line[1], line[0]};
  CHECK_THROWS_AS(average_speed_table(backwards, 1.85), DomainError);
}

TEST_CASE("parallelism metric") {
  const ParamGrid g;
  std::vector<ScalarField2D> line;
  for (double s : {1.0, 1.2}) line.push_back(fixture_field(Fixture::line, g, s));
  const auto t = average_speed_table(line, 1.85);
  const auto par = parallelism_metric(t.samples);
  CHECK(par.matched == 200);
  CHECK(par.max_degrees < 1e-6);

  const auto self = extract_contours(line[0], 1.85);
  const auto identical = parallelism_metric(normal_speed(self, self, line[0], 0.1, &line[0]));
  CHECK(identical.max_degrees < 1e-6);

  // tilted line: angle between normals equals the tilt
  const auto tilted = unit_field(g, 1.1, [](double x, double y) {
    const double th = 5.0 * std::numbers::pi / 180.0;
    return std::cos(th) * x + std::sin(th) * y + 1.0;
  });
  const auto samples = normal_speed(self, extract_contours(tilted, 1.85), line[0], 0.1, &tilted);
  const auto tilt = parallelism_metric(samples);
  CHECK(tilt.mean_degrees == doctest::Approx(5.0).epsilon(1e-6));

  std::vector<SpeedSample> none(3);
  CHECK_THROWS_AS(parallelism_metric(none), DomainError);
}

TEST_CASE("advection") {
  const ParamGrid g;
  const auto f = fixture_field(Fixture::line, g, 1.0);
  const auto base = extract_contours(f, 1.85).contours.at(0);

  const auto still = advect_contour(base, 0.0, 0.1, f);
  CHECK(still.contour.points == base.points);

  // F = x + s, level c: x = c - s. Speed along +normal (+x) is -1.
  const auto next = fixture_field(Fixture::line, g, 1.3);
  const auto moved = advect_contour(base, -1.0, 0.3, f);
  CHECK(hausdorff_distance(moved.contour, extract_contours(next, 1.85), g) < 1e-12);
  for (auto c : moved.clipped) CHECK(c == 0);

  const auto far = advect_contour(base, -10.0, 0.3, f);
  CHECK(far.contour.points.empty());
  for (auto c : far.clipped) CHECK(c == 1);

  std::vector<ScalarField2D> fields;
  for (double s : {1.0, 1.1, 1.2, 1.5, 1.7}) fields.push_back(fixture_field(Fixture::line, g, s));
  const auto table = average_speed_table(fields, 1.85);
  const auto report = advection_report(fields, 1.85, table);
  REQUIRE(report.size() == 4);
  for (const auto& r : report) {
    CHECK(r.hausdorff < 1e-9);
    CHECK(r.n_clipped == 0);
    CHECK(r.signed_speed == doctest::Approx(-1.0));
  }
}

TEST_CASE("hausdorff distance") {
  const ParamGrid g{{0.0, 1.0, 2}, {0.0, 2.0, 2}};
  Contour a;
  a.points = {{0.2, 0.0}, {0.2, 2.0}};
  LevelSet b;
  b.contours.push_back(Contour{0.0, 1.0, {{0.5, 0.0}, {0.5, 2.0}}, false});
  CHECK(hausdorff_distance(a, b, g) == doctest::Approx(0.3));
  CHECK_THROWS_AS(hausdorff_distance(a, LevelSet{}, g), DomainError);
}

TEST_CASE("contour shape checks") {
  const ParamGrid g;
  Contour c;
  c.points = {{1.0, 13.0}, {1.1, 14.0}, {1.11, 13.0}};
  CHECK(is_monotone_in_inv_width(c));
  CHECK(max_turning_angle(c, g) > 90.0);
  c.points = {{1.0, 13.0}, {1.1, 14.0}, {1.05, 15.0}};
  CHECK_FALSE(is_monotone_in_inv_width(c));
  c.points = {{1.0, 13.0}, {1.1, 14.0}, {1.2, 15.0}};
  CHECK(max_turning_angle(c, g) < 1e-6);
}

TEST_CASE("speed table csv round trip") {
  const ParamGrid g;
  std::vector<ScalarField2D> fields;
  for (double s : {1.0, 1.1, 1.2}) fields.push_back(fixture_field(Fixture::circle, g, s));
  const auto table = average_speed_table(fields, 0.0625);
  const auto text = speed_table_to_csv(table);
  CHECK(text.rfind("s,ds,mean_speed,std_speed,n_samples,n_excluded\n", 0) == 0);
  const auto back = speed_table_from_csv(text);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t k = 0; k < back.rows.size(); ++k) {
    CHECK(back.rows[k].scale == table.rows[k].scale);
    CHECK(back.rows[k].ds == table.rows[k].ds);
    CHECK(back.rows[k].mean_speed == table.rows[k].mean_speed);
    CHECK(back.rows[k].std_speed == table.rows[k].std_speed);
    CHECK(back.rows[k].n_samples == table.rows[k].n_samples);
    CHECK(back.rows[k].n_excluded == table.rows[k].n_excluded);
  }
  CHECK(speed_table_to_csv(back) == text);
}
