#include "wflo/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "wflo/baselines.hpp"
#include "wflo/decode_round.hpp"
#include "wflo/error.hpp"
#include "wflo/tightening.hpp"

namespace wflo {

namespace {

WindRose load_rose_from(const RunConfig& cfg) {
  if (!cfg.rose_file.empty()) return load_rose(cfg.rose_file, cfg.observation_hours);
  std::vector<WindState> states;
  if (cfg.rose_builtin == "wr1") {
    states = builtin_wr1(cfg.rose_speed).states();
  } else if (cfg.rose_builtin == "uniform") {
    states = uniform_rose(cfg.rose_speed, cfg.rose_directions).states();
  } else {
    throw Error("unknown builtin rose '" + cfg.rose_builtin + "' (expected wr1 or uniform)");
  }
  return WindRose(std::move(states), cfg.observation_hours);
}

TurbineSpec turbine_from(const RunConfig& cfg) {
  TurbineSpec spec;
  spec.rotor_radius = cfg.rotor_radius;
  spec.hub_height = cfg.hub_height;
  if (!cfg.thrust_file.empty()) spec.thrust = load_speed_table(cfg.thrust_file);
  else spec.thrust = cfg.thrust;
  if (!cfg.power_file.empty()) {
    PowerCurve curve(load_speed_table(cfg.power_file));
    spec.rated_power_kw = curve.rated_power();
    spec.power = std::move(curve);
  }
  spec.validate();
  return spec;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Penalized model, solve (and tighten), decode, repair. Beta doubles while
// the MAP estimate misses K by more than the slack.
void solve_mp(const QipModel& qip, const RunConfig& cfg, SolveOutcome& out) {
  SolverConfig scfg;
  scfg.max_sweeps = cfg.max_sweeps;
  scfg.tolerance = cfg.tolerance;
  scfg.cutoff_seconds = cfg.cutoff_seconds;
  scfg.seed = cfg.seed;

  TighteningConfig tcfg;
  tcfg.max_clusters = cfg.tighten ? cfg.max_clusters : 0;
  tcfg.clusters_per_round = cfg.clusters_per_round;
  if (!cfg.clusters_file.empty()) {
    std::ifstream in(cfg.clusters_file);
    if (!in) throw Error("cannot open cluster list '" + cfg.clusters_file.string() + "'");
    tcfg.initial_clusters = read_clusters(in);
  }

  double beta = cfg.beta ? *cfg.beta : default_beta(*qip.w, qip.k);
  SolveReport report;
  for (std::size_t round = 0;; ++round) {
    MrfModel model = build_penalized_mrf(qip, beta);
    if (!qip.exclusions.empty()) model = add_exclusions(std::move(model), qip.exclusions, 1e3 * beta);
    auto [tightened, rep] = tighten_and_resolve(model, scfg, tcfg);
    report = std::move(rep);
    out.clusters = tightened.clusters.size();
    const std::size_t placed = report.best_assignment.count();
    const std::size_t miss = placed > qip.k ? placed - qip.k : qip.k - placed;
    if (miss <= cfg.count_slack || round >= cfg.beta_escalations) break;
    beta *= 2.0;
    ++out.beta_escalations;
  }
  out.beta = beta;

  Layout decoded = round_top_k(report, qip.k, qip.exclusions);
  out.decoded_surrogate = qip_objective(*qip.w, decoded);
  Layout best = decode_and_repair(report, qip, cfg.repair_passes);
  out.layout = std::move(best);
  out.report = std::move(report);
}

}  // namespace

Instance load_instance(const RunConfig& cfg) {
  FarmGrid grid = make_square_grid(cfg.area_side, cfg.cells_per_side);
  TurbineSpec spec = turbine_from(cfg);
  ProximityPairs excl;
  if (cfg.exclusions) {
    excl = cfg.min_separation ? proximity_pairs(grid, *cfg.min_separation)
                              : proximity_pairs(grid, spec);
  }
  WakeParams wake;
  wake.decay = cfg.decay;
  wake.initial_radius = cfg.initial_radius;
  return Instance{std::move(grid), load_rose_from(cfg), std::move(spec), wake, std::move(excl),
                  nullptr};
}

void build_matrix(Instance& inst, unsigned threads) {
  inst.w = std::make_shared<const InteractionMatrix>(
      build_interaction_matrix(inst.grid, inst.rose, inst.spec, inst.wake, threads));
}

SolveOutcome solve_instance(const Instance& inst, const RunConfig& cfg) {
  if (!inst.w) throw Error("interaction matrix has not been built");
  SolveOutcome out;
  out.solver = to_string(cfg.solver);
  const std::size_t n = inst.grid.size();
  if (cfg.k > n) {
    throw Error("K = " + std::to_string(cfg.k) + " exceeds the " + std::to_string(n) + " cells");
  }
  const auto start = std::chrono::steady_clock::now();
  if (cfg.k == 0) {
    out.layout = Layout(n);
  } else {
    const QipModel qip = make_qip(inst.w, cfg.k, inst.exclusions);
    switch (cfg.solver) {
      case SolverKind::mp: solve_mp(qip, cfg, out); break;
      case SolverKind::greedy: out.layout = greedy_construct(qip); break;
      case SolverKind::local: out.layout = local_search(qip, cfg.restarts, cfg.seed).layout; break;
      case SolverKind::brute: out.layout = brute_force(qip, cfg.enumeration_budget).layout; break;
    }
  }
  out.wall_time = seconds_since(start);
  out.surrogate = qip_objective(*inst.w, out.layout);
  out.evaluation = evaluate_layout(out.layout, inst.grid, inst.rose, inst.spec, inst.wake);
  return out;
}

nlohmann::json to_json(const SolveOutcome& o) {
  nlohmann::json j;
  j["solver"] = o.solver;
  j["surrogate"] = o.surrogate;
  j["wall_time_s"] = o.wall_time;
  j["evaluation"] = o.evaluation;
  if (o.report) {
    const auto& r = *o.report;
    j["solve"] = {{"best_energy", r.best_energy},
                  {"lower_bound", r.lower_bound()},
                  {"lower_bound_trace", r.lower_bound_trace},
                  {"sweeps", r.sweeps},
                  {"wall_time_s", r.wall_time},
                  {"converged", r.converged},
                  {"best_assignment", r.best_assignment.selected()},
                  {"beta", o.beta},
                  {"beta_escalations", o.beta_escalations},
                  {"clusters", o.clusters},
                  {"decoded_surrogate", o.decoded_surrogate}};
    if (std::isinf(r.best_energy)) j["solve"]["best_energy"] = nullptr;
  }
  return j;
}

}  // namespace wflo
