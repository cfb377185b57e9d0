// Runs the morse_lsm binary end to end. MORSE_LSM_BIN is set by the build.

#include "morse_lsm/contour.hpp"
#include "morse_lsm/field_io.hpp"
#include "morse_lsm/levelset.hpp"
#include "morse_lsm/param_field.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace morse_lsm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("morse_lsm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto base = fs::temp_directory_path() / ("morse_lsm_cli_io_" + std::to_string(counter++));
  const std::string cmd = env + (env.empty() ? "" : " ") + MORSE_LSM_BIN + std::string(" ") + args +
                          " >" + base.string() + ".out 2>" + base.string() + ".err";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(base.string() + ".out");
  r.err = read_file(base.string() + ".err");
  fs::remove(base.string() + ".out");
  fs::remove(base.string() + ".err");
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("cli solve") {
  const auto r = run("solve --C 12 --a 1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "-9.67551"));
  CHECK(contains(r.out, "-5.77653"));
  CHECK(contains(r.out, "bound_state_count  5"));
  CHECK(contains(r.out, "d01"));

  const auto bad = run("solve --C 0.1 --a 2");
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "bound_state_count"));

  const auto js = run("solve --C 12 --a 1 --json");
  REQUIRE(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j.at("E0").at("numeric").get<double>() == doctest::Approx(-9.67551).epsilon(1e-6));
  CHECK(j.at("E0").at("analytic").get<double>() == doctest::Approx(-9.67551).epsilon(1e-6));
  CHECK(j.at("bound_state_count").get<int>() == 5);
  CHECK(j.at("d01").get<double>() == doctest::Approx(0.334355386).epsilon(1e-8));
  CHECK(j.at("convergence").contains("estimated_error"));

  CHECK(run("solve --C -1 --a 1").code == 2);
  CHECK(run("bogus").code != 0);
}

TEST_CASE("cli field files are resumable and deterministic") {
  const auto dir = scratch("field");
  const std::string small = "--grid 0.8,2,3,12,26,3 --s 1,1.1";
  const auto first = run("field " + small + " --workers 1 --out " + (dir / "w1").string());
  REQUIRE(first.code == 0);
  CHECK(fs::exists(dir / "w1" / "field_s1.json"));
  CHECK(fs::exists(dir / "w1" / "field_s1.1.json"));

  const auto again = run("field " + small + " --out " + (dir / "w1").string());
  CHECK(again.code == 0);
  CHECK(contains(again.err, "skip"));
  CHECK_FALSE(contains(again.err, "sampling"));

  const auto forced = run("field " + small + " --force --out " + (dir / "w1").string());
  CHECK(contains(forced.err, "sampling"));

  REQUIRE(run("field " + small + " --workers 8 --out " + (dir / "w8").string()).code == 0);
  for (const char* name : {"field_s1.json", "field_s1.1.json"})
    CHECK(read_file(dir / "w1" / name) == read_file(dir / "w8" / name));

  // a different grid is not mistaken for an up-to-date file
  const auto other = run("field --grid 0.8,2,2,12,26,2 --s 1 --out " + (dir / "w1").string());
  CHECK(contains(other.err, "sampling"));

  const auto defaults = run("field --fixture line", "MORSE_LSM_OUT=" + (dir / "env").string());
  CHECK(defaults.code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "env")) files += e.path().extension() == ".json";
  CHECK(files == 5);

  std::ofstream(dir / "blocker") << "x";
  CHECK(run("field --fixture line --out " + (dir / "blocker" / "sub").string()).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("cli contours") {
  const auto dir = scratch("contours");
  const auto r = run("contours --fixture circle --svg --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto svg = read_file(dir / "levelsets.svg");
  std::size_t polylines = 0;
  for (auto i = svg.find("<polyline"); i != std::string::npos; i = svg.find("<polyline", i + 1))
    ++polylines;
  CHECK(polylines == 5);

  const auto reloaded = read_contours_csv(dir / "contours_s1.2.csv");
  REQUIRE(reloaded.size() == 1);
  const auto direct = extract_contours(fixture_field(Fixture::circle, ParamGrid{}, 1.2), 0.0625);
  REQUIRE(reloaded[0].contours.size() == direct.contours.size());
  CHECK(reloaded[0].contours[0].points == direct.contours[0].points);

  CHECK(run("contours --fixture circle --level 5 --out " + dir.string()).code == 2);
  CHECK(run("contours --out " + (dir / "nothing").string()).code == 2);

  // physics fields at the median level
  const std::string small = "--grid 0.8,2,4,12,26,4 --s 1,1.2";
  REQUIRE(run("field " + small + " --out " + (dir / "phys").string()).code == 0);
  const auto phys = run("contours " + small + " --out " + (dir / "phys").string());
  CHECK(phys.code == 0);
  const auto level_field = load_field(dir / "phys" / "field_s1.json");
  CHECK(contains(phys.out, "level " + std::to_string(level_field.percentile(50)).substr(0, 6)));
  fs::remove_all(dir);
}

TEST_CASE("cli speeds") {
  const auto dir = scratch("speeds");
  const auto r = run("speeds --fixture line --summary --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto table = read_speed_table_csv(dir / "speeds.csv");
  REQUIRE(table.rows.size() == 4);
  for (const auto& row : table.rows) CHECK(std::fabs(row.mean_speed - 1.0) < 1e-6);
  CHECK(contains(r.out, "relative_spread"));
  CHECK(contains(r.out, "mean_of_means"));

  // a level that leaves the square for the last s gives an empty contour
  CHECK(run("speeds --fixture line --level 1.6 --out " + dir.string()).code == 2);
  CHECK(run("speeds --out " + (dir / "missing").string()).code == 2);

  // config file, with a flag overriding it
  std::ofstream(dir / "cfg.json") << R"({"fixture": "line", "s": [1.0, 1.2, 1.4], "out": ")" +
                                         (dir / "cfg").string() + "\"}";
  const auto cfg = run("speeds --config " + (dir / "cfg.json").string());
  REQUIRE(cfg.code == 0);
  CHECK(read_speed_table_csv(dir / "cfg" / "speeds.csv").rows.size() == 2);
  REQUIRE(run("speeds --config " + (dir / "cfg.json").string() + " --s 1,1.1,1.2,1.3").code == 0);
  CHECK(read_speed_table_csv(dir / "cfg" / "speeds.csv").rows.size() == 3);

  std::ofstream(dir / "broken.json") << "{\"s\": [1.0,";
  CHECK(run("speeds --config " + (dir / "broken.json").string()).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("cli advect") {
  const auto dir = scratch("advect");
  const auto r = run("advect --fixture line --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto csv = read_file(dir / "advect.csv");
  CHECK(csv.rfind("s,ds,signed_speed,std_speed,hausdorff,bound,n_points,n_clipped\n", 0) == 0);
  std::stringstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string cell;
    for (int k = 0; k < 5; ++k) std::getline(cells, cell, ',');
    CHECK(std::stod(cell) < 1e-9);
  }
  CHECK(rows == 4);

  // identical fields written as physics files: zero speed, zero error
  const ParamGrid grid{{0.8, 2.0, 21}, {12.0, 26.0, 21}};
  for (double s : {1.0, 1.1}) {
    auto f = tabulate_field(grid, s, [](const ParamPoint& p) { return p.inv_width + 0.01 * p.depth; },
                            SolverConfig{}.digest());
    save_field(f, dir / "same" / ("field_s" + std::string(s == 1.0 ? "1" : "1.1") + ".json"));
  }
  const auto same = run("advect --grid 0.8,2,21,12,26,21 --s 1,1.1 --out " + (dir / "same").string());
  REQUIRE(same.code == 0);
  const auto same_csv = read_file(dir / "same" / "advect.csv");
  std::stringstream s2(same_csv);
  std::getline(s2, line);
  std::getline(s2, line);
  std::stringstream cells(line);
  std::string cell;
  for (int k = 0; k < 5; ++k) std::getline(cells, cell, ',');
  CHECK(std::stod(cell) < 1e-12);

  CHECK(run("advect --out " + (dir / "none").string()).code == 2);
  fs::remove_all(dir);
}
