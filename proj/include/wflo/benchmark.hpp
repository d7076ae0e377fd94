#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wflo/run_config.hpp"

namespace wflo {

/// Settings applied on top of every case, e.g. from the command line.
struct CaseOverrides {
  std::optional<SolverKind> solver;
  std::optional<std::uint64_t> seed;
  std::optional<double> cutoff_seconds;
  std::optional<std::size_t> max_clusters;
  std::optional<std::size_t> clusters_per_round;
};

void apply(const CaseOverrides& o, RunConfig& cfg);

struct BenchmarkCase {
  std::string name;
  RunConfig config;
  std::optional<double> reference_kw;
  std::string baseline;  // name of the case to compare against, may be empty
};

struct BenchmarkRow {
  std::string name;
  std::string solver;
  std::size_t k = 0;
  bool ok = false;
  std::string error;
  double expected_power_kw = 0.0;
  double aep_kwh = 0.0;
  double surrogate = 0.0;
  double wall_time_s = 0.0;
  std::size_t clusters = 0;
  std::vector<std::size_t> turbines;
  std::optional<double> reference_kw;
  std::optional<double> pct_vs_reference;
  std::string baseline;
  std::optional<double> pct_vs_baseline;
  std::optional<double> time_ratio_vs_baseline;
};

struct BenchmarkResult {
  std::string note;
  std::vector<BenchmarkRow> rows;
};

struct Suite {
  std::string note;
  std::vector<BenchmarkCase> cases;
};

/// INI suite: an optional [suite] section with `note`, then one
/// [case.NAME] section per case naming a run `config` plus overrides
/// (k, solver, cutoff_seconds, max_clusters, clusters_per_round, tighten,
/// restarts, seed, max_sweeps) and optional `reference_kw` and `baseline`.
Suite load_suite(const std::filesystem::path& path);

/// Runs every case in file order. A failing case is recorded in its row and
/// the suite continues. Cases sharing a config file share one matrix.
BenchmarkResult run_suite(const Suite& suite, const CaseOverrides& overrides = {});

void write_benchmark_csv(const BenchmarkResult& result, const std::filesystem::path& path);
nlohmann::json to_json(const BenchmarkResult& result);

}  // namespace wflo
