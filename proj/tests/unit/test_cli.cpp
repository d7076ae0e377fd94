#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "wflo/cli.hpp"
#include "wflo/error.hpp"
#include "wflo/render.hpp"
#include "wflo/run_config.hpp"
#include "wflo/wake_jensen.hpp"

using namespace wflo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wflo_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto path = dir / "run.ini";
  std::ofstream(path) << body;
  return path;
}

const std::string kSmall =
    "[rose]\nbuiltin = wr1\n[grid]\narea_side = 1000\ncells_per_side = 5\n"
    "[problem]\nk = 4\n[solver]\nname = local\nrestarts = 5\n";

}  // namespace

TEST_CASE("config loading resolves paths and rejects unknown keys") {
  const auto dir = scratch("config");
  const auto path = write_config(dir, "[rose]\nfile = wr.csv\n[solver]\nname = brute\n");
  const RunConfig cfg = load_run_config(path);
  CHECK(cfg.rose_file == dir / "wr.csv");
  CHECK(cfg.solver == SolverKind::brute);
  CHECK(cfg.output_dir == "out");
  CHECK_THROWS_AS(load_run_config(write_config(dir, "[rose]\ncolour = red\n")), Error);
  CHECK_THROWS_AS(load_run_config(write_config(dir, "[solver]\nname = cplex\n")), Error);
  CHECK_THROWS_AS(load_run_config(write_config(dir, "[grid]\ncells_per_side = x\n")), Error);
}

TEST_CASE("matrix command on the unidirectional benchmark") {
  const auto dir = scratch("matrix");
  CommandOptions opts;
  opts.config = fs::path(WFLO_DATA_DIR) / "mosetti_wr1.ini";
  opts.out = dir;
  std::ostringstream log, err;
  REQUIRE(cmd_matrix(opts, log, err) == 0);
  const InteractionMatrix w = read_matrix_csv(dir / "matrix.csv");
  CHECK(w.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t j = 0; j < 100; ++j) {
      if (i != j) CHECK(w(i, j) * w(j, i) == 0.0);
    }
  }
}

TEST_CASE("matrix command on a uniform rose is symmetric") {
  const auto dir = scratch("matrix_uniform");
  CommandOptions opts;
  opts.config = write_config(
      dir, "[rose]\nbuiltin = uniform\ndirections = 36\n[grid]\narea_side = 2000\n"
           "cells_per_side = 10\n");
  opts.out = dir;
  std::ostringstream log, err;
  REQUIRE(cmd_matrix(opts, log, err) == 0);
  CHECK(read_matrix_csv(dir / "matrix.csv").max_asymmetry() < 1e-12);
}

TEST_CASE("missing rose file fails and names the path") {
  const auto dir = scratch("missing");
  CommandOptions opts;
  opts.config = write_config(dir, "[rose]\nfile = nowhere.csv\n");
  opts.out = dir;
  std::ostringstream log, err;
  CHECK(cmd_matrix(opts, log, err) != 0);
  CHECK(err.str().find((dir / "nowhere.csv").string()) != std::string::npos);
}

TEST_CASE("solve command writes layout and report") {
  const auto dir = scratch("solve");
  CommandOptions opts;
  opts.config = write_config(dir, kSmall);
  opts.out = dir;
  std::ostringstream log, err;
  REQUIRE(cmd_solve(opts, log, err) == 0);
  std::ifstream layout(dir / "layout.csv");
  std::string header;
  std::getline(layout, header);
  CHECK(header == "cell_index,x_m,y_m");
  std::size_t rows = 0;
  for (std::string line; std::getline(layout, line);) ++rows;
  CHECK(rows == 4);
  std::ifstream in(dir / "report.json");
  const auto report = nlohmann::json::parse(in);
  CHECK(report["config"]["problem"]["k"] == 4);
  CHECK(report["evaluation"]["expected_power_kw"].get<double>() > 0.0);
}

TEST_CASE("solve command is deterministic for every solver") {
  for (const char* solver : {"mp", "greedy", "local", "brute"}) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = scratch(std::string("det_") + solver + std::to_string(rep));
      CommandOptions opts;
      opts.config = write_config(dir, kSmall);
      opts.out = dir;
      opts.overrides.solver = parse_solver(solver);
      std::ostringstream log, err;
      REQUIRE(cmd_solve(opts, log, err) == 0);
      std::ifstream in(dir / "layout.csv");
      std::stringstream body;
      body << in.rdbuf();
      if (rep == 0) first = body.str();
      else CHECK(body.str() == first);
    }
  }
}

TEST_CASE("K = 0 gives an empty layout") {
  const auto dir = scratch("k0");
  CommandOptions opts;
  opts.config = write_config(dir, "[grid]\narea_side = 1000\ncells_per_side = 5\n[problem]\nk = 0\n");
  opts.out = dir;
  std::ostringstream log, err;
  REQUIRE(cmd_solve(opts, log, err) == 0);
  std::ifstream in(dir / "report.json");
  const auto report = nlohmann::json::parse(in);
  CHECK(report["evaluation"]["aep_kwh"].get<double>() == 0.0);
  CHECK(report["evaluation"]["turbines"].empty());
}

TEST_CASE("infeasible K fails") {
  const auto dir = scratch("k_big");
  CommandOptions opts;
  opts.config = write_config(dir, "[grid]\narea_side = 1000\ncells_per_side = 2\n[problem]\nk = 5\n");
  opts.out = dir;
  std::ostringstream log, err;
  CHECK(cmd_solve(opts, log, err) != 0);
}

TEST_CASE("benchmark command") {
  const auto dir = scratch("bench");
  const auto cfg = write_config(dir, kSmall);
  std::ofstream(dir / "s.suite") << "[suite]\nnote = smoke\n[case.a]\nconfig = run.ini\n"
                                    "solver = greedy\nreference_kw = 2000\n[case.b]\n"
                                    "config = run.ini\nsolver = local\nbaseline = a\n"
                                    "[case.broken]\nconfig = run.ini\nk = 999\n";
  CommandOptions opts;
  opts.config = dir / "s.suite";
  opts.out = dir / "results";
  std::ostringstream log, err;
  REQUIRE(cmd_benchmark(opts, log, err) == 0);
  std::ifstream in(dir / "results" / "benchmark.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["note"] == "smoke");
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["status"] == "ok");
  CHECK(j["rows"][0]["pct_vs_reference"].is_number());
  CHECK(j["rows"][1]["baseline"] == "a");
  CHECK(j["rows"][2]["status"] == "error");
  CHECK(fs::exists(dir / "results" / "benchmark.csv"));
  CHECK(log.str().find("note: smoke") != std::string::npos);
}

TEST_CASE("empty suite") {
  const auto dir = scratch("bench_empty");
  std::ofstream(dir / "empty.suite") << "";
  CommandOptions opts;
  opts.config = dir / "empty.suite";
  opts.out = dir;
  std::ostringstream log, err;
  REQUIRE(cmd_benchmark(opts, log, err) == 0);
  std::ifstream in(dir / "benchmark.json");
  CHECK(nlohmann::json::parse(in)["rows"].empty());
}

TEST_CASE("render command") {
  const auto dir = scratch("render");
  CommandOptions solve;
  solve.config = write_config(dir, kSmall);
  solve.out = dir;
  std::ostringstream log, err;
  REQUIRE(cmd_solve(solve, log, err) == 0);

  CommandOptions opts;
  opts.config = solve.config;
  opts.layout = dir / "layout.csv";
  opts.out = dir / "a.svg";
  REQUIRE(cmd_render(opts, log, err) == 0);
  opts.out = dir / "b.svg";
  REQUIRE(cmd_render(opts, log, err) == 0);
  std::stringstream a, b;
  a << std::ifstream(dir / "a.svg").rdbuf();
  b << std::ifstream(dir / "b.svg").rdbuf();
  CHECK(a.str() == b.str());
  std::size_t markers = 0;
  for (auto pos = a.str().find("<circle"); pos != std::string::npos;
       pos = a.str().find("<circle", pos + 1)) {
    ++markers;
  }
  CHECK(markers == 4);

  std::ofstream(dir / "bad.csv") << "cell_index,x_m,y_m\n99,0,0\n";
  opts.layout = dir / "bad.csv";
  CHECK(cmd_render(opts, log, err) != 0);
}

TEST_CASE("rendered markers sit on the cell centroids") {
  const FarmGrid g = make_square_grid(2000, 10);
  const std::string empty = render_svg(Layout(100), g);
  CHECK(empty.find("<circle") == std::string::npos);
  CHECK(empty.find("<rect") != std::string::npos);
  const std::string svg = render_svg(Layout::from_indices(100, std::vector<std::size_t>{0, 99}), g);
  // 600 px across 2000 m with a 20 px margin; y is flipped.
  CHECK(svg.find("cx=\"50.00\" cy=\"590.00\"") != std::string::npos);
  CHECK(svg.find("cx=\"590.00\" cy=\"50.00\"") != std::string::npos);
  CHECK_THROWS_AS(render_svg(Layout(5), g), Error);
}
