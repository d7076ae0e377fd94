#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include "wflo/benchmark.hpp"

namespace wflo {

struct CommandOptions {
  std::filesystem::path config;   // run config, or suite file for benchmark
  std::filesystem::path layout;   // render only
  std::optional<std::filesystem::path> out;
  CaseOverrides overrides;
};

/// Each command returns the process exit code: 0 iff every output was
/// written. Diagnostics go to `err`, short progress lines to `log`.
int cmd_matrix(const CommandOptions& opts, std::ostream& log, std::ostream& err);
int cmd_solve(const CommandOptions& opts, std::ostream& log, std::ostream& err);
int cmd_benchmark(const CommandOptions& opts, std::ostream& log, std::ostream& err);
int cmd_render(const CommandOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace wflo
