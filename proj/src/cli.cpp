#include "wflo/cli.hpp"

#include <fmt/format.h>
#include <fstream>

#include "wflo/decode_round.hpp"
#include "wflo/error.hpp"
#include "wflo/pipeline.hpp"
#include "wflo/render.hpp"

namespace wflo {

namespace {

std::filesystem::path output_dir(const CommandOptions& opts, const RunConfig& cfg) {
  auto dir = opts.out ? *opts.out : cfg.output_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    err << "wflo: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_matrix(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opts.config);
    Instance inst = load_instance(cfg);
    build_matrix(inst, cfg.threads);
    const auto dir = output_dir(opts, cfg);
    write_matrix_csv(*inst.w, dir / "matrix.csv");
    log << fmt::format("wrote {}x{} matrix to {}\n", inst.w->size(), inst.w->size(),
                       (dir / "matrix.csv").string());
  });
}

int cmd_solve(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opts.config);
    apply(opts.overrides, cfg);
    Instance inst = load_instance(cfg);
    build_matrix(inst, cfg.threads);
    const SolveOutcome out = solve_instance(inst, cfg);
    const auto dir = output_dir(opts, cfg);
    write_layout_csv(out.layout, inst.grid, dir / "layout.csv");
    nlohmann::json report = to_json(out);
    report["config"] = to_json(cfg);
    write_json(report, dir / "report.json");
    log << fmt::format("{}: K={} expected power {:.1f} kW, AEP {:.0f} kWh, {:.2f} s\n",
                       out.solver, cfg.k, out.evaluation.expected_power_kw,
                       out.evaluation.aep_kwh, out.wall_time);
  });
}

int cmd_benchmark(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const Suite suite = load_suite(opts.config);
    const BenchmarkResult result = run_suite(suite, opts.overrides);
    const auto dir = opts.out ? *opts.out : std::filesystem::path("out");
    std::filesystem::create_directories(dir);
    write_benchmark_csv(result, dir / "benchmark.csv");
    write_json(to_json(result), dir / "benchmark.json");
    if (!result.note.empty()) log << "note: " << result.note << '\n';
    for (const auto& r : result.rows) {
      if (!r.ok) {
        log << fmt::format("{:<16} {:<6} K={:<3} error: {}\n", r.name, r.solver, r.k, r.error);
        continue;
      }
      log << fmt::format("{:<16} {:<6} K={:<3} {:>10.1f} kW {:>8.2f} s", r.name, r.solver, r.k,
                         r.expected_power_kw, r.wall_time_s);
      if (r.pct_vs_reference) log << fmt::format("  {:+.2f}% vs reference", *r.pct_vs_reference);
      log << '\n';
    }
  });
}

int cmd_render(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opts.config);
    Instance inst = load_instance(cfg);
    const Layout layout = read_layout_csv(opts.layout, inst.grid);
    RenderOptions ropts;
    ropts.wind_from_deg = inst.rose.dominant().direction;
    const auto path = opts.out ? *opts.out : std::filesystem::path("layout.svg");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << render_svg(layout, inst.grid, ropts);
    if (!out) throw Error("failed writing '" + path.string() + "'");
    log << fmt::format("wrote {} turbines to {}\n", layout.count(), path.string());
  });
}

}  // namespace wflo
