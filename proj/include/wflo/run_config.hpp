#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "wflo/wake_jensen.hpp"

namespace wflo {

enum class SolverKind { mp, greedy, local, brute };

SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind kind);

/// Everything one run needs. Relative paths are resolved against the
/// directory of the file they were read from.
struct RunConfig {
  std::filesystem::path source;  // config file, empty when built in code

  // [rose]
  std::string rose_builtin = "wr1";   // wr1 | uniform, ignored when rose_file is set
  std::filesystem::path rose_file;
  double rose_speed = 12.0;           // builtin roses only
  std::size_t rose_directions = 36;   // builtin uniform rose only
  double observation_hours = 8760.0;

  // [grid]
  double area_side = 2000.0;
  std::size_t cells_per_side = 10;

  // [turbine]
  double rotor_radius = 20.0;
  double hub_height = 60.0;
  double thrust = 0.88;
  std::filesystem::path thrust_file;
  std::filesystem::path power_file;   // empty: 0.3 u^3

  // [wake]
  double decay = 0.1;
  WakeRadius initial_radius = WakeRadius::rotor;

  // [problem]
  std::size_t k = 0;
  bool exclusions = true;
  std::optional<double> min_separation;  // default 5 R

  // [solver]
  SolverKind solver = SolverKind::mp;
  std::size_t max_sweeps = 2000;
  double tolerance = 1e-9;
  double cutoff_seconds = 3600.0;
  bool tighten = true;
  std::size_t max_clusters = 5000;
  std::size_t clusters_per_round = 20;
  std::filesystem::path clusters_file;
  std::optional<double> beta;
  std::size_t beta_escalations = 4;
  std::size_t count_slack = 1;
  std::size_t repair_passes = 100000;
  std::size_t restarts = 20;
  std::uint64_t seed = 1;
  double enumeration_budget = 1e7;
  unsigned threads = 0;

  // [output]
  std::filesystem::path output_dir = "out";
};

/// Reads an INI file with sections rose, grid, turbine, wake, problem,
/// solver and output. Unknown keys are rejected.
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace wflo
