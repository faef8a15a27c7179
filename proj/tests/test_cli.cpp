#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

using namespace screenbie::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("screenbie_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::vector<std::string> out;
  for (std::string s; std::getline(f, s);) out.push_back(s);
  return out;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  return json::parse(f);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string error_of(const json& j, Mode m) {
  try {
    parse_config(j, m);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "screenbie-cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return main(static_cast<int>(argv.size()), argv.data());
}

const json small_solve = json::parse(R"({
  "geometry": {"intervals": [[0, 1]]},
  "k": 3,
  "mesh": {"n": 32},
  "field": {"x": [-0.5, 1.5, 5], "z": [0.5, 1.0, 2]}
})");

}  // namespace

TEST_CASE("defaults parse and echo the config") {
  const auto c = parse_config(json::object(), Mode::Probe);
  CHECK(c.mode == Mode::Probe);
  CHECK(c.geometry.dim() == 2);
  CHECK(c.mesh_n == 64);
  CHECK(c.seed == 42);
  CHECK(c.echo == json::object());
}

TEST_CASE("malformed configs name the offending field") {
  CHECK(error_of({{"mesh", {{"n", 48}}}}, Mode::Solve).rfind("config.mesh.n:", 0) == 0);
  CHECK(error_of({{"mesh", {{"n", 8192}}}}, Mode::Solve).rfind("config.mesh.n:", 0) == 0);
  CHECK(error_of({{"mesh", {{"n", "64"}}}}, Mode::Solve).rfind("config.mesh.n:", 0) == 0);
  // 128 is a power of two but not a square, so no side x side grid.
  const json sq{{"geometry", {{"rectangle", {{"x", {0, 1}}, {"y", {0, 1}}}}}}, {"mesh", {{"n", 128}}}};
  CHECK(error_of(sq, Mode::Solve).rfind("config.mesh.n:", 0) == 0);
  CHECK(error_of({{"geometry", {{"intervals", {{0, 1}, {2, 1.5}}}}}}, Mode::Solve)
            .rfind("config.geometry.intervals[1]:", 0) == 0);
  CHECK(error_of({{"geometry", {{"intervals", {{0, 1}, {0.5, 2}}}}}}, Mode::Solve).rfind("config.geometry:", 0) == 0);
  CHECK(error_of({{"wave", {{"direction", {1, 1}}}}}, Mode::Solve).rfind("config.wave.direction:", 0) == 0);
  CHECK(error_of({{"wave", {{"direction", {0, 0, -1}}}}}, Mode::Solve).rfind("config.wave.direction:", 0) == 0);
  CHECK(error_of({{"k_list", {4, 2}}}, Mode::Sweep).rfind("config.k_list:", 0) == 0);
  CHECK(error_of({{"k_list", {-1, 2}}}, Mode::Sweep).rfind("config.k_list[0]:", 0) == 0);
  CHECK(error_of({{"k", 0}}, Mode::Sweep).rfind("config.k:", 0) == 0);
  CHECK(error_of({{"quantity", "nope"}}, Mode::Sweep).rfind("config.quantity:", 0) == 0);
  CHECK(error_of({{"field", {{"x", {0, 1}}}}}, Mode::Solve).rfind("config.field.x:", 0) == 0);
  CHECK(error_of({{"mode", "sweep"}}, Mode::Solve).rfind("config.mode:", 0) == 0);
  CHECK(error_of({{"colour", "red"}}, Mode::Solve).rfind("config.colour:", 0) == 0);
  CHECK(error_of({{"seed", -3}}, Mode::Solve).rfind("config.seed:", 0) == 0);
}

TEST_CASE("unreadable or invalid config files are reported with their path") {
  const auto dir = scratch("bad_file");
  const auto p = dir / "broken.json";
  std::ofstream(p) << "{ \"k\": 3, ";
  try {
    load_config(p.string(), Mode::Solve);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind(p.string() + ":", 0) == 0);
  }
  CHECK_THROWS_AS(load_config((dir / "missing.json").string(), Mode::Solve), ConfigError);
  CHECK(invoke({"solve", "--config", p.string()}) == 1);
}

TEST_CASE("solve writes the documented CSVs and results.json") {
  const auto dir = scratch("solve");
  auto c = parse_config(small_solve, Mode::Solve);
  c.output = (dir / "a").string();
  REQUIRE(run(c) == 0);

  const auto density = lines(dir / "a" / "density.csv");
  CHECK(density.front() == "index,re,im");
  CHECK(density.size() == 33);
  const auto field = lines(dir / "a" / "field.csv");
  CHECK(field.front() == "x,z,re,im");
  CHECK(field.size() == 1 + 5 * 2);

  const auto r = read_json(dir / "a" / "results.json");
  for (const char* key : {"mode", "config", "versions", "timestamp", "verdict", "warnings", "results"})
    CHECK_MESSAGE(r.contains(key), key);
  CHECK(r["mode"] == "solve");
  CHECK(r["config"] == small_solve);
  CHECK(r["results"]["elements"] == 32);
  CHECK(r["results"]["far_field"].size() == 9);

  // Same config, same bytes apart from the timestamp.
  c.output = (dir / "b").string();
  REQUIRE(run(c) == 0);
  CHECK(slurp(dir / "a" / "density.csv") == slurp(dir / "b" / "density.csv"));
  CHECK(slurp(dir / "a" / "field.csv") == slurp(dir / "b" / "field.csv"));
  auto ra = read_json(dir / "a" / "results.json");
  auto rb = read_json(dir / "b" / "results.json");
  ra.erase("timestamp");
  rb.erase("timestamp");
  CHECK(ra == rb);
}

TEST_CASE("solve on a rectangle writes x,y,z field columns") {
  const auto dir = scratch("solve3");
  const json j{{"geometry", {{"rectangle", {{"x", {0, 1}}, {"y", {0, 1}}}}}},
               {"wave", {{"direction", {0, 0, -1}}}},
               {"k", 2},
               {"mesh", {{"n", 64}}},
               {"field", {{"x", {0, 1, 3}}, {"y", {0.5, 0.5, 1}}, {"z", {0.5, 1, 2}}}}};
  auto c = parse_config(j, Mode::Solve);
  c.output = dir.string();
  REQUIRE(run(c) == 0);
  CHECK(lines(dir / "density.csv").size() == 65);
  const auto field = lines(dir / "field.csv");
  CHECK(field.front() == "x,y,z,re,im");
  CHECK(field.size() == 1 + 3 * 2);
}

TEST_CASE("a sweep over a single k is inconclusive") {
  const auto dir = scratch("sweep1");
  const int code = [&] {
    auto p = dir / "c.json";
    std::ofstream(p) << R"({"k_list": [10], "quantity": "coercivity_dirichlet"})";
    return invoke({"sweep", "--config", p.string(), "--out", (dir / "o").string()});
  }();
  CHECK(code == 2);
  const auto rows = lines(dir / "o" / "sweep.csv");
  CHECK(rows.front() == "k,quantity,bound,ratio");
  CHECK(rows.size() == 2);
  const auto r = read_json(dir / "o" / "results.json");
  CHECK(r["verdict"] == "inconclusive");
  CHECK(r["results"].contains("fitted_slope"));
  CHECK(r["results"].contains("bound_constant"));
}

TEST_CASE("a Dirichlet sweep over four k passes and --seed is honoured") {
  const auto dir = scratch("sweep4");
  auto p = dir / "c.json";
  std::ofstream(p) << R"({"k_list": [2, 4, 8, 16], "quantity": "coercivity_dirichlet", "seed": 1})";
  CHECK(invoke({"sweep", "--config", p.string(), "--out", (dir / "o").string(), "--seed", "7"}) == 0);
  CHECK(lines(dir / "o" / "sweep.csv").size() == 5);
  CHECK(invoke({"sweep", "--config", p.string(), "--out", (dir / "q").string(), "--seed", "7", "--jobs", "2"}) == 0);
  CHECK(slurp(dir / "o" / "sweep.csv") == slurp(dir / "q" / "sweep.csv"));
  // The seed changes the ensemble, hence the minimum.
  CHECK(invoke({"sweep", "--config", p.string(), "--out", (dir / "r").string()}) == 0);
  CHECK(slurp(dir / "o" / "sweep.csv") != slurp(dir / "r" / "sweep.csv"));
}

TEST_CASE("probe writes one row per ensemble member") {
  const auto dir = scratch("probe");
  auto c = parse_config({{"k", 4}}, Mode::Probe);
  c.output = dir.string();
  CHECK(run(c) == 0);
  const auto rows = lines(dir / "probe.csv");
  CHECK(rows.front() == "member,modulated,angle_deg,dirichlet,neumann,t_s0,t_s05,t_s1,single_layer,single_layer_same");
  CHECK(rows.size() == 21);
}

TEST_CASE("command line errors exit with status 1") {
  CHECK(invoke({}) == 1);
  CHECK(invoke({"frobnicate"}) == 1);
  CHECK(invoke({"solve", "--jobs", "0"}) == 1);
}

namespace {

std::vector<std::vector<double>> numeric_rows(const std::vector<std::string>& rows) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<double> r;
    std::stringstream ss(rows[i]);
    for (std::string cell; std::getline(ss, cell, ',');) r.push_back(std::stod(cell));
    out.push_back(r);
  }
  return out;
}

// Same header, same shape, values within rel of the column scale. Exact bytes
// would tie the goldens to one compiler's floating-point contraction.
void check_golden(const fs::path& produced, const fs::path& golden, double rel) {
  const auto a = lines(produced), b = lines(golden);
  REQUIRE(a.size() == b.size());
  CHECK(a.front() == b.front());
  const auto x = numeric_rows(a), y = numeric_rows(b);
  const std::size_t cols = y.front().size();
  std::vector<double> scale(cols, 0.0);
  for (const auto& r : y)
    for (std::size_t c = 0; c < cols; ++c) scale[c] = std::max(scale[c], std::abs(r[c]));
  for (std::size_t i = 0; i < y.size(); ++i) {
    REQUIRE(x[i].size() == cols);
    for (std::size_t c = 0; c < cols; ++c)
      CHECK_MESSAGE(std::abs(x[i][c] - y[i][c]) <= rel * scale[c], produced.filename().string(), " row ", i + 1);
  }
}

const fs::path golden_dir = SCREENBIE_GOLDEN_DIR;

}  // namespace

TEST_CASE("golden: solve with n = 2, k = 5, N = 64") {
  const auto dir = scratch("golden_solve");
  REQUIRE(invoke({"solve", "--config", (golden_dir / "solve_k5_n64.json").string(), "--out", dir.string()}) == 0);
  CHECK(lines(dir / "density.csv").size() == 65);
  check_golden(dir / "density.csv", golden_dir / "solve_k5_n64.density.csv", 1e-9);
  check_golden(dir / "field.csv", golden_dir / "solve_k5_n64.field.csv", 1e-9);
}

TEST_CASE("golden: Dirichlet coercivity sweep") {
  const auto dir = scratch("golden_sweep");
  REQUIRE(invoke({"sweep", "--config", (golden_dir / "sweep_dirichlet.json").string(), "--out", dir.string()}) == 0);
  check_golden(dir / "sweep.csv", golden_dir / "sweep_dirichlet.sweep.csv", 1e-9);
  const auto r = read_json(dir / "results.json");
  for (const char* key : {"name", "length", "sweep", "fitted_slope", "bound_constant", "verdict", "detail", "warnings"})
    CHECK_MESSAGE(r["results"].contains(key), key);
}
