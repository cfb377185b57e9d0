// morse_lsm: solves, field sweeps, contours, speed tables and advection checks.
//
// Exit codes: 0 success, 1 I/O, 2 domain, 3 convergence.

#include "morse_lsm/contour.hpp"
#include "morse_lsm/dipole.hpp"
#include "morse_lsm/errors.hpp"
#include "morse_lsm/field_io.hpp"
#include "morse_lsm/levelset.hpp"
#include "morse_lsm/morse.hpp"
#include "morse_lsm/param_field.hpp"
#include "morse_lsm/svg_plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace morse_lsm;

namespace {

enum Exit { ok = 0, io_failure = 1, domain_failure = 2, convergence_failure = 3 };

void log(const std::string& msg) { std::cerr << "morse_lsm: " << msg << '\n'; }

std::string num(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct RunConfig {
  ParamGrid grid;
  std::vector<double> scales{1.0, 1.1, 1.2, 1.5, 1.7};
  std::optional<double> level;
  std::optional<double> level_percentile;
  SolverConfig solver;
  fs::path out;
  unsigned workers = 1;
  double r0 = 1.0;
  std::optional<Fixture> fixture;
};

ParamGrid parse_grid(const std::string& spec) {
  std::vector<double> v;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("--grid: cannot parse '" + item + "'");
    }
  }
  if (v.size() != 6) throw DomainError("--grid expects a_min,a_max,n_a,C_min,C_max,n_C");
  auto count = [](double x) {
    if (x < 2 || x != std::floor(x)) throw DomainError("--grid: counts must be integers >= 2");
    return static_cast<std::size_t>(x);
  };
  ParamGrid g{{v[0], v[1], count(v[2])}, {v[3], v[4], count(v[5])}};
  g.validate();
  return g;
}

void apply_config_file(RunConfig& cfg, const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw LoadError(path.string() + ": expected a JSON object");
  try {
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.is_string()) {
        cfg.grid = parse_grid(g.get<std::string>());
      } else {
        cfg.grid = ParamGrid{{g.at("a_min").get<double>(), g.at("a_max").get<double>(),
                              g.at("n_a").get<std::size_t>()},
                             {g.at("C_min").get<double>(), g.at("C_max").get<double>(),
                              g.at("n_C").get<std::size_t>()}};
        cfg.grid.validate();
      }
    }
    if (j.contains("s")) cfg.scales = j.at("s").get<std::vector<double>>();
    if (j.contains("level") && !j.at("level").is_null()) cfg.level = j.at("level").get<double>();
    if (j.contains("level_percentile") && !j.at("level_percentile").is_null())
      cfg.level_percentile = j.at("level_percentile").get<double>();
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      cfg.solver.energy_tolerance = s.value("energy_tolerance", cfg.solver.energy_tolerance);
      cfg.solver.tail_tolerance = s.value("tail_tolerance", cfg.solver.tail_tolerance);
      cfg.solver.max_refinements = s.value("max_refinements", cfg.solver.max_refinements);
      cfg.solver.initial_points = s.value("initial_points", cfg.solver.initial_points);
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<unsigned>();
    if (j.contains("r0")) cfg.r0 = j.at("r0").get<double>();
    if (j.contains("fixture") && !j.at("fixture").is_null())
      cfg.fixture = parse_fixture(j.at("fixture").get<std::string>());
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

/// Raw flag values; only the ones given on the command line override the
/// config file.
struct Flags {
  std::string config;
  std::string grid;
  std::vector<double> scales;
  double level = 0.0;
  double level_percentile = 50.0;
  std::string out;
  unsigned workers = 1;
  double r0 = 1.0;
  std::string fixture;
  bool force = false;
  bool svg = false;
  bool summary = false;

  CLI::Option* o_grid = nullptr;
  CLI::Option* o_s = nullptr;
  CLI::Option* o_level = nullptr;
  CLI::Option* o_pct = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_r0 = nullptr;
  CLI::Option* o_fixture = nullptr;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration; flags override it");
  f.o_grid = cmd->add_option("--grid", f.grid, "a_min,a_max,n_a,C_min,C_max,n_C");
  f.o_s = cmd->add_option("--s", f.scales, "scale values, ascending")->delimiter(',');
  f.o_level = cmd->add_option("--level", f.level, "contour level");
  f.o_pct = cmd->add_option("--level-percentile", f.level_percentile,
                            "level as a percentile of the first field")
                ->check(CLI::Range(0.0, 100.0));
  f.o_out = cmd->add_option("--out", f.out, "output directory (default $MORSE_LSM_OUT or ./out)");
  f.o_workers = cmd->add_option("--workers", f.workers, "threads for field sampling")
                    ->check(CLI::PositiveNumber);
  f.o_r0 = cmd->add_option("--r0", f.r0, "equilibrium distance");
  f.o_fixture = cmd->add_option("--fixture", f.fixture, "synthetic field instead of solves")
                    ->check(CLI::IsMember({"line", "circle"}));
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (const char* env = std::getenv("MORSE_LSM_OUT"); env && *env) cfg.out = env;
  else cfg.out = "out";
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  if (f.o_grid->count()) cfg.grid = parse_grid(f.grid);
  if (f.o_s->count()) cfg.scales = f.scales;
  if (f.o_level->count()) cfg.level = f.level;
  if (f.o_pct->count()) cfg.level_percentile = f.level_percentile;
  if (f.o_out->count()) cfg.out = f.out;
  if (f.o_workers->count()) cfg.workers = f.workers;
  if (f.o_r0->count()) cfg.r0 = f.r0;
  if (f.o_fixture->count()) cfg.fixture = parse_fixture(f.fixture);

  cfg.grid.validate();
  cfg.solver.validate();
  if (cfg.scales.empty()) throw DomainError("empty s list");
  for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
    if (!(cfg.scales[i] > 0.0)) throw DomainError("s values must be positive");
    if (i > 0 && !(cfg.scales[i] > cfg.scales[i - 1]))
      throw DomainError("s values must be strictly ascending");
  }
  if (cfg.workers == 0) throw DomainError("--workers must be positive");
  if (cfg.level_percentile && !(*cfg.level_percentile >= 0.0 && *cfg.level_percentile <= 100.0))
    throw DomainError("level percentile must lie in [0, 100]");
  return cfg;
}

std::string scale_tag(double s) { return num(s, "%.6g"); }
fs::path field_path(const RunConfig& cfg, double s) {
  return cfg.out / ("field_s" + scale_tag(s) + ".json");
}

std::string expected_digest(const RunConfig& cfg) {
  return cfg.fixture ? "fixture:" + fixture_name(*cfg.fixture) : cfg.solver.digest();
}

ScalarField2D make_fixture(const RunConfig& cfg, double s) {
  auto f = fixture_field(*cfg.fixture, cfg.grid, s);
  f.solver_digest = expected_digest(cfg);
  f.r0 = cfg.r0;
  return f;
}

/// Fields for the downstream stages: built in memory for fixtures, loaded
/// from the output directory otherwise.
std::vector<ScalarField2D> obtain_fields(const RunConfig& cfg) {
  std::vector<ScalarField2D> fields;
  for (double s : cfg.scales) {
    if (cfg.fixture) {
      fields.push_back(make_fixture(cfg, s));
      continue;
    }
    const auto path = field_path(cfg, s);
    if (!fs::exists(path))
      throw DomainError("missing field file " + path.string() + " (run the field command first)");
    auto field = load_field(path, expected_digest(cfg));
    if (!(field.grid == cfg.grid) || field.scale != s || field.r0 != cfg.r0)
      throw DomainError(path.string() + " was computed for a different grid, s or r0");
    fields.push_back(std::move(field));
  }
  return fields;
}

double resolve_level(const RunConfig& cfg, const std::vector<ScalarField2D>& fields) {
  if (cfg.level) return *cfg.level;
  if (cfg.fixture && !cfg.level_percentile) return fixture_default_level(*cfg.fixture);
  if (fields.front().valid_count() == 0)
    throw DomainError("first field has no valid cells; cannot choose a level");
  return fields.front().percentile(cfg.level_percentile.value_or(50.0));
}

int cmd_solve(double depth, double inv_width, double r0, bool as_json) {
  const MorseParams params{depth, inv_width, r0};
  params.validate();
  const double lambda = depth_parameter(params);
  const int count = bound_state_count(params);
  if (count < 2)
    throw InsufficientBoundStates(count, 2);

  const SolverConfig config;
  const auto result = dipole_01(params, config);
  const double e0 = analytic_energy(params, 0);
  const double e1 = analytic_energy(params, 1);
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::fabs(b); };

  if (as_json) {
    json j;
    j["C"] = depth;
    j["a"] = inv_width;
    j["r0"] = r0;
    j["lambda"] = lambda;
    j["bound_state_count"] = count;
    j["E0"] = {{"numeric", result.ground_energy}, {"analytic", e0},
               {"rel_error", rel(result.ground_energy, e0)}};
    j["E1"] = {{"numeric", result.excited_energy}, {"analytic", e1},
               {"rel_error", rel(result.excited_energy, e1)}};
    j["d01"] = result.value;
    j["convergence"] = {{"estimated_error", result.estimated_error},
                        {"refinements", result.refinements},
                        {"r_min", result.grid[0]},
                        {"r_max", result.grid[result.grid.size() - 1]},
                        {"n_points", result.grid.size()},
                        {"solver_digest", config.digest()}};
    std::cout << j.dump(2) << '\n';
    return ok;
  }
  std::printf("C = %.10g  a = %.10g  r0 = %.10g\n", depth, inv_width, r0);
  std::printf("lambda             %.12g\n", lambda);
  std::printf("bound_state_count  %d\n", count);
  std::printf("%-5s %22s %22s %12s\n", "", "numeric", "analytic", "rel_error");
  std::printf("%-5s %22.14g %22.14g %12.3e\n", "E_0", result.ground_energy, e0,
              rel(result.ground_energy, e0));
  std::printf("%-5s %22.14g %22.14g %12.3e\n", "E_1", result.excited_energy, e1,
              rel(result.excited_energy, e1));
  std::printf("d01                %.12g\n", result.value);
  std::printf("estimated_error    %.3e\n", result.estimated_error);
  std::printf("grid               r in [%.6g, %.6g], %zu points, %d refinements\n",
              result.grid[0], result.grid[result.grid.size() - 1], result.grid.size(),
              result.refinements);
  return ok;
}

int cmd_field(const RunConfig& cfg, bool force) {
  fs::create_directories(cfg.out);
  const auto digest = expected_digest(cfg);
  for (double s : cfg.scales) {
    const auto path = field_path(cfg, s);
    if (!force && fs::exists(path)) {
      try {
        const auto existing = load_field(path, digest);
        if (existing.grid == cfg.grid && existing.scale == s && existing.r0 == cfg.r0) {
          log("skip " + path.string() + " (up to date)");
          continue;
        }
      } catch (const LoadError& e) {
        log("recompute " + path.string() + ": " + e.what());
      }
    }
    ScalarField2D field;
    if (cfg.fixture) {
      field = make_fixture(cfg, s);
    } else {
      log("sampling s = " + scale_tag(s) + " on " + std::to_string(cfg.grid.size()) +
          " cells with " + std::to_string(cfg.workers) + " worker(s)");
      const auto start = std::chrono::steady_clock::now();
      std::size_t next_report = 0;
      field = sample_field(cfg.grid, s, cfg.solver, cfg.workers, cfg.r0,
                           [&](std::size_t done, std::size_t total) {
                             if (done * 10 < next_report * total && done != total) return;
                             next_report = done * 10 / total + 1;
                             log("  s = " + scale_tag(s) + ": " + std::to_string(done) + "/" +
                                 std::to_string(total));
                           });
      const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
      log("  done in " + num(secs.count(), "%.1f") + " s, " + std::to_string(field.valid_count()) +
          " valid cells");
    }
    if (field.valid_count() == 0) log("warning: no valid cells at s = " + scale_tag(s));
    save_field(field, path);
    std::cout << path.string() << '\n';
  }
  return ok;
}

int cmd_contours(const RunConfig& cfg, bool svg) {
  const auto fields = obtain_fields(cfg);
  const double level = resolve_level(cfg, fields);
  std::vector<LevelSet> sets;
  bool any = false;
  for (const auto& f : fields) {
    sets.push_back(extract_contours(f, level));
    const auto& set = sets.back();
    if (set.out_of_range) log("level " + num(level) + " outside the field range at s = " +
                              scale_tag(f.scale));
    any = any || !set.empty();
  }
  if (!any) {
    log("level " + num(level) + " produced no contour for any s");
    return domain_failure;
  }
  fs::create_directories(cfg.out);
  std::printf("level %.10g\n", level);
  for (const auto& set : sets) {
    const auto path = cfg.out / ("contours_s" + scale_tag(set.scale) + ".csv");
    write_contours_csv(path, {set});
    std::printf("s = %-6s contours %zu  points %zu  -> %s\n", scale_tag(set.scale).c_str(),
                set.contours.size(), set.point_count(), path.string().c_str());
  }
  if (svg) {
    const auto path = cfg.out / "levelsets.svg";
    write_levelsets_svg(path, sets, cfg.grid, "d01 level sets, level " + num(level, "%.6g"));
    std::printf("svg -> %s\n", path.string().c_str());
  }
  return ok;
}

int cmd_speeds(const RunConfig& cfg, bool summary) {
  if (cfg.scales.size() < 2) throw DomainError("speeds needs at least two s values");
  const auto fields = obtain_fields(cfg);
  const double level = resolve_level(cfg, fields);
  const auto table = average_speed_table(fields, level);
  for (const auto& w : table.warnings) log("warning: " + w);
  for (const auto& row : table.rows)
    if (row.n_samples == 0) {
      log("empty contour or no matched samples at s = " + scale_tag(row.scale));
      return domain_failure;
    }
  fs::create_directories(cfg.out);
  const auto path = cfg.out / "speeds.csv";
  write_speed_table_csv(path, table);
  std::printf("level %.10g\n", level);
  std::printf("%-8s %-8s %14s %14s %10s %10s\n", "s", "ds", "mean_speed", "std_speed", "n_samples",
              "n_excluded");
  for (const auto& row : table.rows)
    std::printf("%-8s %-8s %14.8g %14.6g %10zu %10zu\n", scale_tag(row.scale).c_str(),
                scale_tag(row.ds).c_str(), row.mean_speed, row.std_speed, row.n_samples,
                row.n_excluded);
  if (summary) {
    std::printf("mean_of_means    %.8g\n", table.mean_of_means());
    std::printf("relative_spread  %.6g\n", table.relative_spread());
    const auto par = parallelism_metric(table.samples);
    std::printf("normal_angle     mean %.4g deg  max %.4g deg\n", par.mean_degrees,
                par.max_degrees);
  }
  std::printf("table -> %s\n", path.string().c_str());
  return ok;
}

int cmd_advect(const RunConfig& cfg) {
  if (cfg.scales.size() < 2) throw DomainError("advect needs at least two s values");
  const auto fields = obtain_fields(cfg);
  const double level = resolve_level(cfg, fields);
  const auto table = average_speed_table(fields, level);
  for (const auto& w : table.warnings) log("warning: " + w);
  const auto rows = advection_report(fields, level, table);

  std::ostringstream csv;
  csv << "s,ds,signed_speed,std_speed,hausdorff,bound,n_points,n_clipped\n";
  std::printf("level %.10g\n", level);
  std::printf("%-8s %-8s %14s %12s %12s %12s %9s %9s\n", "s", "ds", "signed_speed", "std_speed",
              "hausdorff", "2*std*ds", "n_points", "n_clipped");
  for (const auto& r : rows) {
    csv << num(r.scale, "%.17g") << ',' << num(r.ds, "%.17g") << ','
        << num(r.signed_speed, "%.17g") << ',' << num(r.std_speed, "%.17g") << ','
        << num(r.hausdorff, "%.17g") << ',' << num(r.bound(), "%.17g") << ',' << r.n_points
        << ',' << r.n_clipped << '\n';
    std::printf("%-8s %-8s %14.8g %12.5g %12.5g %12.5g %9zu %9zu\n", scale_tag(r.scale).c_str(),
                scale_tag(r.ds).c_str(), r.signed_speed, r.std_speed, r.hausdorff, r.bound(),
                r.n_points, r.n_clipped);
  }
  fs::create_directories(cfg.out);
  const auto path = cfg.out / "advect.csv";
  write_file_atomic(path, csv.str());
  std::printf("report -> %s\n", path.string().c_str());
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morse transition-dipole level sets across a scale parameter"};
  app.require_subcommand(1);

  double depth = 0.0, inv_width = 0.0, r0 = 1.0;
  bool as_json = false;
  auto* solve = app.add_subcommand("solve", "single-point spectrum and d01");
  solve->add_option("--C", depth, "well depth")->required();
  solve->add_option("--a", inv_width, "inverse width")->required();
  solve->add_option("--r0", r0, "equilibrium distance");
  solve->add_flag("--json", as_json, "JSON report on stdout");

  Flags field_flags, contour_flags, speed_flags, advect_flags;
  auto* field = app.add_subcommand("field", "sample d01 over the grid, one file per s");
  add_run_flags(field, field_flags);
  field->add_flag("--force", field_flags.force, "recompute existing files");

  auto* contours = app.add_subcommand("contours", "extract level sets, optional SVG");
  add_run_flags(contours, contour_flags);
  contours->add_flag("--svg", contour_flags.svg, "write levelsets.svg");

  auto* speeds = app.add_subcommand("speeds", "average normal speed per consecutive s pair");
  add_run_flags(speeds, speed_flags);
  speeds->add_flag("--summary", speed_flags.summary, "print mean of means and relative spread");

  auto* advect = app.add_subcommand("advect", "constant-speed advection vs recomputed contours");
  add_run_flags(advect, advect_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : domain_failure;
  }

  try {
    if (*solve) return cmd_solve(depth, inv_width, r0, as_json);
    if (*field) return cmd_field(resolve(field_flags), field_flags.force);
    if (*contours) return cmd_contours(resolve(contour_flags), contour_flags.svg);
    if (*speeds) return cmd_speeds(resolve(speed_flags), speed_flags.summary);
    if (*advect) return cmd_advect(resolve(advect_flags));
  } catch (const DomainError& e) {
    log(e.what());
    return domain_failure;
  } catch (const ConvergenceError& e) {
    log(e.what());
    return convergence_failure;
  } catch (const LoadError& e) {
    log(e.what());
    return io_failure;
  } catch (const IoError& e) {
    log(e.what());
    return io_failure;
  } catch (const fs::filesystem_error& e) {
    log(e.what());
    return io_failure;
  }
  return ok;
}
