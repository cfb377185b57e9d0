#include "morse_lsm/param_field.hpp"

#include "morse_lsm/dipole.hpp"
#include "morse_lsm/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace morse_lsm {

void ParamGrid::validate() const {
  if (!(inv_width.min > 0.0) || !(inv_width.min < inv_width.max))
    throw DomainError("ParamGrid: need 0 < a_min < a_max");
  if (!(depth.min > 0.0) || !(depth.min < depth.max))
    throw DomainError("ParamGrid: need 0 < C_min < C_max");
  if (inv_width.count < 2 || depth.count < 2)
    throw DomainError("ParamGrid: need at least 2 samples per axis");
}

MorseParams apply_scale(const MorseParams& params, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("scale s must be positive");
  return {params.depth * s, params.inv_width / s, params.r0};
}

ParamVelocity velocity_field(const MorseParams& params, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("scale s must be positive");
  return {-params.inv_width / (s * s), params.depth};
}

std::size_t ScalarField2D::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(valid.begin(), valid.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

std::vector<double> ScalarField2D::sorted_valid_values() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (valid[i]) out.push_back(values[i]);
  std::sort(out.begin(), out.end());
  return out;
}

double ScalarField2D::percentile(double pct) const {
  const auto sorted = sorted_valid_values();
  if (sorted.empty()) throw DomainError("percentile of a field with no valid cells");
  if (!(pct >= 0.0 && pct <= 100.0)) throw DomainError("percentile must lie in [0, 100]");
  const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

namespace {

struct CellLocation {
  std::size_t i;
  std::size_t j;
  double ty;
  double tx;
};

bool locate(const ParamGrid& grid, const ParamPoint& p, CellLocation& loc) {
  const double fx = (p.inv_width - grid.inv_width.min) / grid.inv_width.step();
  const double fy = (p.depth - grid.depth.min) / grid.depth.step();
  const double nx = static_cast<double>(grid.inv_width.count - 1);
  const double ny = static_cast<double>(grid.depth.count - 1);
  constexpr double slack = 1e-9;
  if (!(fx >= -slack && fx <= nx + slack && fy >= -slack && fy <= ny + slack)) return false;
  const double cx = std::clamp(fx, 0.0, nx);
  const double cy = std::clamp(fy, 0.0, ny);
  loc.j = std::min(static_cast<std::size_t>(cx), grid.inv_width.count - 2);
  loc.i = std::min(static_cast<std::size_t>(cy), grid.depth.count - 2);
  loc.tx = cx - static_cast<double>(loc.j);
  loc.ty = cy - static_cast<double>(loc.i);
  return true;
}

} // namespace

double ScalarField2D::interpolate(const ParamPoint& p) const {
  CellLocation c;
  if (!locate(grid, p, c)) return std::numeric_limits<double>::quiet_NaN();
  if (!is_valid(c.i, c.j) || !is_valid(c.i, c.j + 1) || !is_valid(c.i + 1, c.j) ||
      !is_valid(c.i + 1, c.j + 1))
    return std::numeric_limits<double>::quiet_NaN();
  const double bottom = (1.0 - c.tx) * at(c.i, c.j) + c.tx * at(c.i, c.j + 1);
  const double top = (1.0 - c.tx) * at(c.i + 1, c.j) + c.tx * at(c.i + 1, c.j + 1);
  return (1.0 - c.ty) * bottom + c.ty * top;
}

ScalarField2D sample_field(const ParamGrid& grid, double s, const SolverConfig& config,
                           unsigned workers, double r0, const ProgressCallback& progress) {
  grid.validate();
  config.validate();
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("scale s must be positive");

  ScalarField2D field;
  field.grid = grid;
  field.scale = s;
  field.r0 = r0;
  field.solver_digest = config.digest();
  field.values.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  field.valid.assign(grid.size(), 0);

  const std::size_t total = grid.size();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex report_mutex;
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= total) return;
      const std::size_t i = cell / grid.inv_width.count;
      const std::size_t j = cell % grid.inv_width.count;
      const MorseParams base{grid.depth.at(i), grid.inv_width.at(j), r0};
      try {
        const auto result = dipole_01(apply_scale(base, s), config);
        field.values[cell] = result.value;
        field.valid[cell] = 1;
      } catch (const DomainError&) {
      } catch (const ConvergenceError&) {
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(report_mutex);
        progress(finished, total);
      }
    }
  };

  const unsigned count = std::max(1u, workers);
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return field;
}

GradientField field_gradient(const ScalarField2D& field) {
  const auto& grid = field.grid;
  const std::size_t na = grid.inv_width.count;
  const std::size_t nc = grid.depth.count;
  GradientField g;
  g.grid = grid;
  g.d_inv_width.assign(grid.size(), 0.0);
  g.d_depth.assign(grid.size(), 0.0);
  g.valid.assign(grid.size(), 0);

  auto derivative = [](bool has_prev, bool has_next, double prev, double here, double next,
                       double step, double& out) {
    if (has_prev && has_next)
      out = (next - prev) / (2.0 * step);
    else if (has_next)
      out = (next - here) / step;
    else if (has_prev)
      out = (here - prev) / step;
    else
      return false;
    return true;
  };

  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      if (!field.is_valid(i, j)) continue;
      const std::size_t k = field.index(i, j);
      const bool left = j > 0 && field.is_valid(i, j - 1);
      const bool right = j + 1 < na && field.is_valid(i, j + 1);
      const bool down = i > 0 && field.is_valid(i - 1, j);
      const bool up = i + 1 < nc && field.is_valid(i + 1, j);
      const double here = field.values[k];
      const bool ok_a = derivative(left, right, left ? field.at(i, j - 1) : 0.0, here,
                                   right ? field.at(i, j + 1) : 0.0, grid.inv_width.step(),
                                   g.d_inv_width[k]);
      const bool ok_c = derivative(down, up, down ? field.at(i - 1, j) : 0.0, here,
                                   up ? field.at(i + 1, j) : 0.0, grid.depth.step(), g.d_depth[k]);
      g.valid[k] = (ok_a && ok_c) ? 1 : 0;
    }
  }
  return g;
}

bool interpolate_unit_gradient(const GradientField& gradient, const ParamPoint& p, UnitPoint& out) {
  CellLocation c;
  if (!locate(gradient.grid, p, c)) return false;
  const std::size_t k00 = gradient.index(c.i, c.j);
  const std::size_t k01 = gradient.index(c.i, c.j + 1);
  const std::size_t k10 = gradient.index(c.i + 1, c.j);
  const std::size_t k11 = gradient.index(c.i + 1, c.j + 1);
  if (!gradient.valid[k00] || !gradient.valid[k01] || !gradient.valid[k10] || !gradient.valid[k11])
    return false;
  auto blend = [&](const std::vector<double>& v) {
    const double bottom = (1.0 - c.tx) * v[k00] + c.tx * v[k01];
    const double top = (1.0 - c.tx) * v[k10] + c.tx * v[k11];
    return (1.0 - c.ty) * bottom + c.ty * top;
  };
  const auto& grid = gradient.grid;
  out.x = blend(gradient.d_inv_width) * (grid.inv_width.max - grid.inv_width.min);
  out.y = blend(gradient.d_depth) * (grid.depth.max - grid.depth.min);
  return true;
}

ScalarField2D tabulate_field(const ParamGrid& grid, double s,
                             const std::function<double(const ParamPoint&)>& f, std::string digest) {
  grid.validate();
  ScalarField2D field;
  field.grid = grid;
  field.scale = s;
  field.solver_digest = std::move(digest);
  field.values.resize(grid.size());
  field.valid.assign(grid.size(), 1);
  for (std::size_t i = 0; i < grid.depth.count; ++i)
    for (std::size_t j = 0; j < grid.inv_width.count; ++j)
      field.values[field.index(i, j)] = f({grid.inv_width.at(j), grid.depth.at(i)});
  return field;
}

ScalarField2D fixture_field(Fixture kind, const ParamGrid& grid, double s) {
  if (!(s > 0.0)) throw DomainError("scale s must be positive");
  switch (kind) {
  case Fixture::line:
    return tabulate_field(
        grid, s, [&](const ParamPoint& p) { return grid.to_unit(p).x + s; }, "fixture:line");
  case Fixture::circle:
    return tabulate_field(
        grid, s,
        [&](const ParamPoint& p) {
          const auto u = grid.to_unit(p);
          return ((u.x - 0.5) * (u.x - 0.5) + (u.y - 0.5) * (u.y - 0.5)) / (s * s);
        },
        "fixture:circle");
  }
  throw DomainError("unknown fixture");
}

double fixture_default_level(Fixture kind) {
  // line: x = 1.85 - s stays in [0.15, 0.85]; circle: radius 0.25 s stays below 0.45
  return kind == Fixture::line ? 1.85 : 0.0625;
}

Fixture parse_fixture(const std::string& name) {
  if (name == "line") return Fixture::line;
  if (name == "circle") return Fixture::circle;
  throw DomainError("unknown fixture '" + name + "' (expected line or circle)");
}

std::string fixture_name(Fixture kind) { return kind == Fixture::line ? "line" : "circle"; }

} // namespace morse_lsm
