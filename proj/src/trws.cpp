#include "wflo/trws.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "wflo/error.hpp"

namespace wflo {

namespace {

double min2(const std::array<double, 2>& v) { return std::min(v[0], v[1]); }

double min4(const std::array<double, 4>& v) {
  return std::min(std::min(v[0], v[1]), std::min(v[2], v[3]));
}

}  // namespace

ChainDecomposition decompose(const MrfModel& model) {
  ChainDecomposition out;
  const std::size_t n = model.n_vertices;
  out.vertex_order.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.vertex_order[i] = i;

  std::vector<std::vector<std::size_t>> higher(n);
  for (const auto& e : model.edges) higher[e.s].push_back(e.t);
  for (auto& h : higher) std::sort(h.begin(), h.end());

  // Chains currently ending at each vertex, waiting to be extended.
  std::vector<std::vector<std::size_t>> open(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& waiting = open[v];
    std::reverse(waiting.begin(), waiting.end());
    for (std::size_t u : higher[v]) {
      std::size_t chain;
      if (!waiting.empty()) {
        chain = waiting.back();
        waiting.pop_back();
        out.chains[chain].push_back(u);
      } else {
        chain = out.chains.size();
        out.chains.push_back({v, u});
      }
      open[u].push_back(chain);
    }
  }
  if (!out.chains.empty()) {
    out.rho.assign(out.chains.size(), 1.0 / static_cast<double>(out.chains.size()));
  }
  return out;
}

MessageState::MessageState(const MrfModel& model) : model_(&model) {
  model.validate();
  if (model.edges.size() >= std::numeric_limits<std::uint32_t>::max() ||
      model.n_vertices >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error("model too large for 32-bit edge indexing");
  }
  unary_ = model.unary;
  edge_.reserve(model.edges.size());
  for (const auto& e : model.edges) edge_.push_back(e.phi);
  to_s_.assign(model.edges.size(), {0.0, 0.0});
  to_t_.assign(model.edges.size(), {0.0, 0.0});

  offsets_.assign(model.n_vertices + 1, 0);
  for (const auto& e : model.edges) {
    ++offsets_[e.s + 1];
    ++offsets_[e.t + 1];
  }
  for (std::size_t v = 0; v < model.n_vertices; ++v) offsets_[v + 1] += offsets_[v];
  incident_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    const auto& edge = model.edges[e];
    incident_[fill[edge.s]++] = {static_cast<std::uint32_t>(e),
                                 static_cast<std::uint32_t>(edge.t)};
    incident_[fill[edge.t]++] = {static_cast<std::uint32_t>(e),
                                 static_cast<std::uint32_t>(edge.s)};
  }
}

std::size_t MessageState::find_edge(std::size_t s, std::size_t t) const {
  if (s >= n_vertices() || t >= n_vertices()) return npos;
  for (std::size_t k = offsets_[s]; k < offsets_[s + 1]; ++k) {
    if (incident_[k].other == t) return incident_[k].edge;
  }
  return npos;
}

double MessageState::pairwise_energy(const Layout& x) const {
  if (x.size() != n_vertices()) throw Error("layout length does not match the model");
  double energy = model_->constant;
  for (std::size_t s = 0; s < n_vertices(); ++s) energy += unary_[s][x[s] ? 1 : 0];
  for (std::size_t e = 0; e < edge_.size(); ++e) {
    const auto& edge = model_->edges[e];
    energy += edge_[e][2 * (x[edge.s] ? 1 : 0) + (x[edge.t] ? 1 : 0)];
  }
  return energy;
}

double MessageState::pairwise_bound() const {
  double bound = model_->constant;
  for (const auto& u : unary_) bound += min2(u);
  for (const auto& e : edge_) bound += min4(e);
  return bound;
}

std::array<double, 2> pass_message(MessageState& state, std::size_t s, std::size_t t) {
  const std::size_t e = state.find_edge(s, t);
  if (e == MessageState::npos) throw Error("pass_message: vertices are not adjacent");
  auto& phi = state.edge_[e];
  const auto& from = state.unary_[s];
  const bool s_is_lower = state.model_->edges[e].s == s;
  std::array<double, 2> m{};
  for (int j = 0; j < 2; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
      const double pair = s_is_lower ? phi[2 * i + j] : phi[2 * j + i];
      best = std::min(best, from[i] + pair);
    }
    m[j] = best;
  }
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) (s_is_lower ? phi[2 * i + j] : phi[2 * j + i]) -= m[j];
    state.unary_[t][j] += m[j];
    (s_is_lower ? state.to_t_[e] : state.to_s_[e])[j] += m[j];
  }
  return m;
}

TrwsSolver::TrwsSolver(const MrfModel& model)
    : state_(model),
      lower_count_(model.n_vertices, 0),
      higher_count_(model.n_vertices, 0),
      vertex_clusters_(model.n_vertices) {
  for (const auto& e : model.edges) {
    ++higher_count_[e.s];
    ++lower_count_[e.t];
  }
}

bool TrwsSolver::has_cluster(std::array<std::size_t, 3> v) const {
  std::sort(v.begin(), v.end());
  return std::any_of(clusters_.begin(), clusters_.end(),
                     [&](const Cluster& c) { return c.vertices == v; });
}

bool TrwsSolver::add_cluster(std::array<std::size_t, 3> v) {
  std::sort(v.begin(), v.end());
  if (v[0] == v[1] || v[1] == v[2]) throw Error("triplet cluster needs three distinct vertices");
  if (has_cluster(v)) return false;
  Cluster c;
  c.vertices = v;
  c.edges = {state_.find_edge(v[0], v[1]), state_.find_edge(v[0], v[2]),
             state_.find_edge(v[1], v[2])};
  for (std::size_t e : c.edges) {
    if (e == MessageState::npos) throw Error("triplet cluster edge missing from the model");
  }
  const auto id = static_cast<std::uint32_t>(clusters_.size());
  clusters_.push_back(c);
  for (std::size_t u : v) vertex_clusters_[u].push_back(id);
  return true;
}

double TrwsSolver::lower_bound() const {
  double bound = state_.pairwise_bound();
  for (const auto& c : clusters_) bound += *std::min_element(c.phi.begin(), c.phi.end());
  return bound;
}

double TrwsSolver::reparameterized_energy(const Layout& x) const {
  double energy = state_.pairwise_energy(x);
  for (const auto& c : clusters_) {
    const auto& v = c.vertices;
    energy += c.phi[4 * (x[v[0]] ? 1 : 0) + 2 * (x[v[1]] ? 1 : 0) + (x[v[2]] ? 1 : 0)];
  }
  return energy;
}

void TrwsSolver::receive(std::size_t e, bool into_lower) {
  auto& phi = state_.edge_[e];
  const auto& edge = state_.model_->edges[e];
  std::array<double, 2> mu{};
  if (into_lower) {
    mu = {std::min(phi[0], phi[1]), std::min(phi[2], phi[3])};
    phi[0] -= mu[0];
    phi[1] -= mu[0];
    phi[2] -= mu[1];
    phi[3] -= mu[1];
    state_.unary_[edge.s][0] += mu[0];
    state_.unary_[edge.s][1] += mu[1];
    state_.to_s_[e][0] += mu[0];
    state_.to_s_[e][1] += mu[1];
  } else {
    mu = {std::min(phi[0], phi[2]), std::min(phi[1], phi[3])};
    phi[0] -= mu[0];
    phi[2] -= mu[0];
    phi[1] -= mu[1];
    phi[3] -= mu[1];
    state_.unary_[edge.t][0] += mu[0];
    state_.unary_[edge.t][1] += mu[1];
    state_.to_t_[e][0] += mu[0];
    state_.to_t_[e][1] += mu[1];
  }
}

void TrwsSolver::send(std::size_t s, bool forward) {
  const std::uint32_t out = forward ? higher_count_[s] : lower_count_[s];
  if (out == 0) return;
  const std::uint32_t in = forward ? lower_count_[s] : higher_count_[s];
  const double weight = 1.0 / static_cast<double>(std::max(out, in));
  const std::array<double, 2> share = {weight * state_.unary_[s][0],
                                       weight * state_.unary_[s][1]};
  for (std::size_t k = state_.offsets_[s]; k < state_.offsets_[s + 1]; ++k) {
    const auto& inc = state_.incident_[k];
    if ((inc.other > s) != forward) continue;
    auto& phi = state_.edge_[inc.edge];
    if (forward) {  // s is the lower endpoint
      phi[0] += share[0];
      phi[1] += share[0];
      phi[2] += share[1];
      phi[3] += share[1];
      state_.to_s_[inc.edge][0] -= share[0];
      state_.to_s_[inc.edge][1] -= share[1];
    } else {
      phi[0] += share[0];
      phi[2] += share[0];
      phi[1] += share[1];
      phi[3] += share[1];
      state_.to_t_[inc.edge][0] -= share[0];
      state_.to_t_[inc.edge][1] -= share[1];
    }
  }
  if (out >= in) {
    state_.unary_[s] = {0.0, 0.0};
  } else {
    const double keep = static_cast<double>(out);
    state_.unary_[s][0] -= keep * share[0];
    state_.unary_[s][1] -= keep * share[1];
  }
}

double TrwsSolver::decode_belief(std::size_t s, int label,
                                 const std::vector<std::int8_t>& decoded) const {
  double belief = state_.unary_[s][label];
  for (std::size_t k = state_.offsets_[s]; k < state_.offsets_[s + 1]; ++k) {
    const auto& inc = state_.incident_[k];
    const auto& phi = state_.edge_[inc.edge];
    const bool s_lower = inc.other > s;
    const int fixed = decoded[inc.other];
    if (fixed >= 0) {
      belief += s_lower ? phi[2 * label + fixed] : phi[2 * fixed + label];
    } else {
      belief += s_lower ? std::min(phi[2 * label], phi[2 * label + 1])
                        : std::min(phi[label], phi[2 + label]);
    }
  }
  for (std::uint32_t id : vertex_clusters_[s]) {
    const auto& c = clusters_[id];
    double best = std::numeric_limits<double>::infinity();
    for (int idx = 0; idx < 8; ++idx) {
      const int bits[3] = {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
      bool consistent = true;
      for (int m = 0; m < 3 && consistent; ++m) {
        const std::size_t v = c.vertices[m];
        const int want = v == s ? label : decoded[v];
        consistent = want < 0 || want == bits[m];
      }
      if (consistent) best = std::min(best, c.phi[idx]);
    }
    belief += best;
  }
  return belief;
}

Layout TrwsSolver::pass(bool forward) {
  const std::size_t n = state_.n_vertices();
  std::vector<std::int8_t> decoded(n, -1);
  const std::vector<std::int8_t> unset(n, -1);
  pass_marginals_.resize(n);
  Layout x(n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t s = forward ? step : n - 1 - step;
    for (std::size_t k = state_.offsets_[s]; k < state_.offsets_[s + 1]; ++k) {
      const auto& inc = state_.incident_[k];
      const bool earlier = forward ? inc.other < s : inc.other > s;
      if (earlier) receive(inc.edge, /*into_lower=*/inc.other > s);
    }
    pass_marginals_[s] = {decode_belief(s, 0, unset), decode_belief(s, 1, unset)};
    const double b0 = decode_belief(s, 0, decoded);
    const double b1 = decode_belief(s, 1, decoded);
    const int label = b1 < b0 ? 1 : 0;
    decoded[s] = static_cast<std::int8_t>(label);
    x.set(s, label == 1);
    send(s, forward);
  }
  return x;
}

void TrwsSolver::cluster_round() {
  for (auto& c : clusters_) {
    // Absorb the three edge tables into the triplet.
    for (int m = 0; m < 3; ++m) {
      auto& phi = state_.edge_[c.edges[m]];
      for (int idx = 0; idx < 8; ++idx) {
        const int x0 = (idx >> 2) & 1, x1 = (idx >> 1) & 1, x2 = idx & 1;
        const int pair = m == 0 ? 2 * x0 + x1 : (m == 1 ? 2 * x0 + x2 : 2 * x1 + x2);
        c.phi[idx] += phi[pair];
      }
      for (int p = 0; p < 4; ++p) c.to_edge[m][p] -= phi[p];
      phi = {0.0, 0.0, 0.0, 0.0};
    }
    // Hand a third of each edge min-marginal back to the edges.
    std::array<std::array<double, 4>, 3> mu;
    for (auto& row : mu) row.fill(std::numeric_limits<double>::infinity());
    for (int idx = 0; idx < 8; ++idx) {
      const int x0 = (idx >> 2) & 1, x1 = (idx >> 1) & 1, x2 = idx & 1;
      mu[0][2 * x0 + x1] = std::min(mu[0][2 * x0 + x1], c.phi[idx]);
      mu[1][2 * x0 + x2] = std::min(mu[1][2 * x0 + x2], c.phi[idx]);
      mu[2][2 * x1 + x2] = std::min(mu[2][2 * x1 + x2], c.phi[idx]);
    }
    for (int idx = 0; idx < 8; ++idx) {
      const int x0 = (idx >> 2) & 1, x1 = (idx >> 1) & 1, x2 = idx & 1;
      c.phi[idx] -= (mu[0][2 * x0 + x1] + mu[1][2 * x0 + x2] + mu[2][2 * x1 + x2]) / 3.0;
    }
    for (int m = 0; m < 3; ++m) {
      auto& phi = state_.edge_[c.edges[m]];
      for (int p = 0; p < 4; ++p) {
        phi[p] += mu[m][p] / 3.0;
        c.to_edge[m][p] += mu[m][p] / 3.0;
      }
    }
  }
}

std::vector<std::array<double, 2>> TrwsSolver::min_marginals() const {
  const std::size_t n = state_.n_vertices();
  const std::vector<std::int8_t> none(n, -1);
  std::vector<std::array<double, 2>> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    out[s] = {decode_belief(s, 0, none), decode_belief(s, 1, none)};
  }
  return out;
}

SolveReport TrwsSolver::run(const SolverConfig& cfg) {
  if (state_.n_vertices() == 0) throw Error("cannot solve an empty model");
  if (cfg.max_sweeps == 0) throw Error("max_sweeps must be positive");
  if (!(cfg.tolerance > 0.0)) throw Error("tolerance must be positive");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SolveReport report;
  report.best_assignment = Layout(state_.n_vertices());
  auto consider = [&](const Layout& x) {
    const double energy = mrf_energy(model(), x);
    if (energy < report.best_energy) {
      report.best_energy = energy;
      report.best_assignment = x;
    }
  };

  double previous = lower_bound();
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    consider(pass(true));
    consider(pass(false));
    if (!clusters_.empty()) cluster_round();
    const double bound = lower_bound();
    report.lower_bound_trace.push_back(bound);
    ++report.sweeps;
    if (bound - previous < cfg.tolerance) {
      report.converged = true;
      break;
    }
    previous = bound;
    if (elapsed() >= cfg.cutoff_seconds) break;
  }
  report.min_marginals = pass_marginals_;
  report.wall_time = elapsed();
  return report;
}

SolveReport run(const MrfModel& model, const SolverConfig& cfg) {
  TrwsSolver solver(model);
  return solver.run(cfg);
}

}  // namespace wflo
