#include "wflo/tightening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>

#include "wflo/error.hpp"

namespace wflo {

namespace {

double coupling(const PairwiseTerm& e) {
  return std::abs(e.phi[0] + e.phi[3] - e.phi[1] - e.phi[2]);
}

double triangle_score(const MessageState& state, const std::array<std::size_t, 3>& edges) {
  const auto& a = state.edge(edges[0]);  // (v0, v1)
  const auto& b = state.edge(edges[1]);  // (v0, v2)
  const auto& c = state.edge(edges[2]);  // (v1, v2)
  double joint = std::numeric_limits<double>::infinity();
  for (int idx = 0; idx < 8; ++idx) {
    const int x0 = (idx >> 2) & 1, x1 = (idx >> 1) & 1, x2 = idx & 1;
    joint = std::min(joint, a[2 * x0 + x1] + b[2 * x0 + x2] + c[2 * x1 + x2]);
  }
  auto min4 = [](const std::array<double, 4>& t) {
    return std::min(std::min(t[0], t[1]), std::min(t[2], t[3]));
  };
  return std::max(0.0, joint - (min4(a) + min4(b) + min4(c)));
}

}  // namespace

std::vector<ScoredTriplet> score_candidate_triplets(const TrwsSolver& solver,
                                                    std::size_t max_candidates,
                                                    const CandidatePool& pool) {
  const auto& model = solver.model();
  const auto& state = solver.state();
  const std::size_t n_edges = model.edges.size();
  if (n_edges < 3 || max_candidates == 0) return {};

  std::vector<std::size_t> order(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coupling(model.edges[a]) > coupling(model.edges[b]);
  });
  const auto share =
      static_cast<std::size_t>(std::ceil(pool.edge_fraction * static_cast<double>(n_edges)));
  const std::size_t take = std::min(n_edges, std::max(share, pool.min_edges));

  std::vector<std::vector<std::size_t>> higher(model.n_vertices);
  std::unordered_set<std::uint64_t> in_pool;
  in_pool.reserve(take * 2);
  auto key = [](std::size_t s, std::size_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(t);
  };
  for (std::size_t r = 0; r < take; ++r) {
    const auto& e = model.edges[order[r]];
    higher[e.s].push_back(e.t);
    in_pool.insert(key(e.s, e.t));
  }
  for (auto& h : higher) std::sort(h.begin(), h.end());

  std::vector<ScoredTriplet> out;
  for (std::size_t u = 0; u < model.n_vertices; ++u) {
    const auto& hu = higher[u];
    for (std::size_t a = 0; a < hu.size(); ++a) {
      const std::size_t v = hu[a];
      for (std::size_t b = a + 1; b < hu.size(); ++b) {
        const std::size_t w = hu[b];
        if (!in_pool.count(key(v, w))) continue;
        const std::array<std::size_t, 3> tri = {u, v, w};
        if (solver.has_cluster(tri)) continue;
        const std::array<std::size_t, 3> edges = {state.find_edge(u, v), state.find_edge(u, w),
                                                  state.find_edge(v, w)};
        out.push_back({tri, triangle_score(state, edges)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ScoredTriplet& a, const ScoredTriplet& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.vertices < b.vertices;
  });
  if (out.size() > max_candidates) out.resize(max_candidates);
  return out;
}

MrfModel with_cluster_edges(MrfModel model,
                            const std::vector<std::array<std::size_t, 3>>& triplets) {
  if (triplets.empty()) return model;
  std::unordered_set<std::uint64_t> present;
  present.reserve(model.edges.size());
  auto key = [](std::size_t s, std::size_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(t);
  };
  for (const auto& e : model.edges) present.insert(key(e.s, e.t));
  for (auto tri : triplets) {
    std::sort(tri.begin(), tri.end());
    if (tri[2] >= model.n_vertices || tri[0] == tri[1] || tri[1] == tri[2]) {
      throw Error("triplet cluster references invalid vertices");
    }
    const std::pair<std::size_t, std::size_t> sides[3] = {
        {tri[0], tri[1]}, {tri[0], tri[2]}, {tri[1], tri[2]}};
    for (const auto& [s, t] : sides) {
      if (present.insert(key(s, t)).second) model.edges.push_back({s, t, {0.0, 0.0, 0.0, 0.0}});
    }
  }
  return model;
}

std::pair<TightenedModel, SolveReport> tighten_and_resolve(const MrfModel& model,
                                                           const SolverConfig& solver_cfg,
                                                           const TighteningConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  TightenedModel tightened;
  std::vector<std::array<std::size_t, 3>> initial = cfg.initial_clusters;
  if (initial.size() > cfg.max_clusters) initial.resize(cfg.max_clusters);
  tightened.base = with_cluster_edges(model, initial);

  TrwsSolver solver(tightened.base);
  for (const auto& tri : initial) solver.add_cluster(tri);

  SolveReport report = solver.run(solver_cfg);

  while (solver.clusters().size() < cfg.max_clusters && cfg.clusters_per_round > 0) {
    const double remaining = solver_cfg.cutoff_seconds - elapsed();
    if (remaining <= 0.0) break;
    const std::size_t room =
        std::min(cfg.clusters_per_round, cfg.max_clusters - solver.clusters().size());
    const auto candidates = score_candidate_triplets(solver, room, cfg.pool);
    std::size_t added = 0;
    for (const auto& c : candidates) {
      if (!(c.score > cfg.min_score)) break;
      added += solver.add_cluster(c.vertices) ? 1 : 0;
    }
    if (added == 0) break;
    ++tightened.polytope_generation;

    SolverConfig round_cfg = solver_cfg;
    round_cfg.cutoff_seconds = remaining;
    SolveReport next = solver.run(round_cfg);
    report.lower_bound_trace.insert(report.lower_bound_trace.end(),
                                    next.lower_bound_trace.begin(),
                                    next.lower_bound_trace.end());
    report.sweeps += next.sweeps;
    report.converged = next.converged;
    report.min_marginals = std::move(next.min_marginals);
    if (next.best_energy < report.best_energy) {
      report.best_energy = next.best_energy;
      report.best_assignment = std::move(next.best_assignment);
    }
  }
  report.wall_time = elapsed();

  tightened.clusters.reserve(solver.clusters().size());
  for (const auto& c : solver.clusters()) tightened.clusters.push_back({c.vertices, c.phi});
  return {std::move(tightened), std::move(report)};
}

void write_clusters(const std::vector<TripletCluster>& clusters, std::ostream& out) {
  for (const auto& c : clusters) {
    out << "t " << c.vertices[0] << ' ' << c.vertices[1] << ' ' << c.vertices[2] << '\n';
  }
}

std::vector<std::array<std::size_t, 3>> read_clusters(std::istream& in) {
  std::vector<std::array<std::size_t, 3>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    std::array<std::size_t, 3> tri{};
    if (!(fields >> tag >> tri[0] >> tri[1] >> tri[2]) || tag != "t") {
      throw Error("cluster list line " + std::to_string(line_no) + ": expected 't a b c'");
    }
    out.push_back(tri);
  }
  return out;
}

}  // namespace wflo
