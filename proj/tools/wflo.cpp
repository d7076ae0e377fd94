#include <CLI11.hpp>
#include <iostream>

#include "wflo/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wind farm layout optimization"};
  app.require_subcommand(1);

  wflo::CommandOptions opts;
  std::string out, solver;
  std::uint64_t seed = 0;
  double cutoff = 0.0;
  std::size_t max_clusters = 0, per_round = 0;

  auto add_common = [&](CLI::App* cmd, const char* config_help) {
    cmd->add_option("--config", opts.config, config_help)->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "Output directory (file for render)");
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--solver", solver, "mp | greedy | local | brute")
        ->check(CLI::IsMember({"mp", "greedy", "local", "brute"}));
    cmd->add_option("--seed", seed, "Random seed for restarts");
    cmd->add_option("--cutoff-seconds", cutoff, "Wall-clock cut-off per solve")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-clusters", max_clusters, "Triplet cluster limit");
    cmd->add_option("--clusters-per-round", per_round, "Clusters added per tightening round");
  };

  auto* matrix = app.add_subcommand("matrix", "Build and dump the interaction matrix");
  add_common(matrix, "Run config");
  auto* solve = app.add_subcommand("solve", "Optimize a layout and evaluate it");
  add_common(solve, "Run config");
  add_solver(solve);
  auto* bench = app.add_subcommand("benchmark", "Run a benchmark suite");
  add_common(bench, "Suite file");
  add_solver(bench);
  auto* render = app.add_subcommand("render", "Draw a layout as SVG");
  add_common(render, "Run config describing the grid");
  render->add_option("--layout", opts.layout, "Layout CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (!out.empty()) opts.out = out;
  auto& ov = opts.overrides;
  for (auto* cmd : {solve, bench}) {
    if (cmd->count("--solver")) ov.solver = wflo::parse_solver(solver);
    if (cmd->count("--seed")) ov.seed = seed;
    if (cmd->count("--cutoff-seconds")) ov.cutoff_seconds = cutoff;
    if (cmd->count("--max-clusters")) ov.max_clusters = max_clusters;
    if (cmd->count("--clusters-per-round")) ov.clusters_per_round = per_round;
  }

  if (*matrix) return wflo::cmd_matrix(opts, std::cout, std::cerr);
  if (*solve) return wflo::cmd_solve(opts, std::cout, std::cerr);
  if (*bench) return wflo::cmd_benchmark(opts, std::cout, std::cerr);
  return wflo::cmd_render(opts, std::cout, std::cerr);
}
