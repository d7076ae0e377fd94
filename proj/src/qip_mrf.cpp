#include "wflo/qip_mrf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "wflo/error.hpp"

namespace wflo {

namespace {

std::uint64_t pair_key(std::size_t s, std::size_t t) {
  return (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(t);
}

}  // namespace

Layout Layout::from_indices(std::size_t n, std::span<const std::size_t> indices) {
  Layout x(n);
  for (std::size_t i : indices) {
    if (i >= n) throw Error("cell index " + std::to_string(i) + " out of range");
    x.bits_[i] = 1;
  }
  return x;
}

std::size_t Layout::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Layout::selected() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

QipModel make_qip(std::shared_ptr<const InteractionMatrix> w, std::size_t k,
                  ProximityPairs exclusions) {
  if (!w) throw Error("QIP needs an interaction matrix");
  const std::size_t n = w->size();
  if (k < 1 || k > n) {
    throw Error("turbine budget K=" + std::to_string(k) + " outside [1, " + std::to_string(n) +
                "]");
  }
  for (const auto& [i, j] : exclusions.pairs) {
    if (i >= n || j >= n || i == j) throw Error("exclusion pair references an invalid cell");
  }
  return QipModel{std::move(w), k, std::move(exclusions)};
}

double qip_objective(const InteractionMatrix& w, const Layout& x) {
  if (x.size() != w.size()) throw Error("layout length does not match the interaction matrix");
  const auto on = x.selected();
  double total = 0.0;
  for (std::size_t i : on) {
    for (std::size_t j : on) total += w(i, j);
  }
  return total;
}

bool is_feasible(const QipModel& qip, const Layout& x) {
  if (x.size() != qip.size() || x.count() != qip.k) return false;
  return std::none_of(qip.exclusions.pairs.begin(), qip.exclusions.pairs.end(),
                      [&](const auto& p) { return x[p.first] && x[p.second]; });
}

void MrfModel::validate() const {
  if (unary.size() != n_vertices) throw Error("unary table size does not match vertex count");
  if (!std::isfinite(constant)) throw Error("model constant is not finite");
  for (const auto& u : unary) {
    if (!std::isfinite(u[0]) || !std::isfinite(u[1])) throw Error("unary potential not finite");
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size());
  for (const auto& e : edges) {
    if (!(e.s < e.t) || e.t >= n_vertices) throw Error("edge endpoints must satisfy s < t < n");
    if (!seen.insert(pair_key(e.s, e.t)).second) throw Error("duplicate edge in model");
    for (double v : e.phi) {
      if (!std::isfinite(v)) throw Error("pairwise potential not finite");
    }
  }
}

MrfModel build_penalized_mrf(const QipModel& qip, double beta) {
  if (!(beta > 0.0)) throw Error("penalty factor beta must be positive");
  const auto& w = *qip.w;
  const std::size_t n = w.size();
  const double k = static_cast<double>(qip.k);
  MrfModel model;
  model.n_vertices = n;
  model.unary.assign(n, {0.0, beta * (1.0 - 2.0 * k)});
  model.constant = beta * k * k;
  model.edges.reserve(n * (n - 1) / 2);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const double both_on = w(s, t) + w(t, s) + 2.0 * beta;
      if (both_on == 0.0) continue;
      model.edges.push_back({s, t, {0.0, 0.0, 0.0, both_on}});
    }
  }
  return model;
}

MrfModel add_exclusions(MrfModel model, const ProximityPairs& exclusions, double penalty) {
  if (exclusions.empty()) return model;
  if (!(penalty > 0.0)) throw Error("exclusion penalty must be positive");
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(model.edges.size());
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    index.emplace(pair_key(model.edges[e].s, model.edges[e].t), e);
  }
  for (auto [i, j] : exclusions.pairs) {
    if (i > j) std::swap(i, j);
    if (j >= model.n_vertices || i == j) throw Error("exclusion pair references an invalid cell");
    const auto it = index.find(pair_key(i, j));
    if (it != index.end()) {
      model.edges[it->second].phi[3] += penalty;
    } else {
      index.emplace(pair_key(i, j), model.edges.size());
      model.edges.push_back({i, j, {0.0, 0.0, 0.0, penalty}});
    }
  }
  return model;
}

double mrf_energy(const MrfModel& model, const Layout& x) {
  if (x.size() != model.n_vertices) throw Error("layout length does not match the model");
  double energy = model.constant;
  for (std::size_t s = 0; s < model.n_vertices; ++s) energy += model.unary[s][x[s] ? 1 : 0];
  for (const auto& e : model.edges) energy += e.at(x[e.s] ? 1 : 0, x[e.t] ? 1 : 0);
  return energy;
}

double default_beta(const InteractionMatrix& w, std::size_t k) {
  const std::size_t n = w.size();
  const std::size_t take = std::min(k, n);
  double worst = 0.0;
  std::vector<double> row(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) row[i] = w(i, j) + w(j, i);
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(take), row.end(),
                     std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += row[i];
    worst = std::max(worst, sum);
  }
  return 1.0 + worst;
}

void write_model_text(const MrfModel& model, std::ostream& out) {
  const auto old = out.precision(17);
  for (std::size_t s = 0; s < model.n_vertices; ++s) {
    out << "u " << s << ' ' << model.unary[s][0] << ' ' << model.unary[s][1] << '\n';
  }
  for (const auto& e : model.edges) {
    out << "e " << e.s << ' ' << e.t << ' ' << e.phi[0] << ' ' << e.phi[1] << ' ' << e.phi[2]
        << ' ' << e.phi[3] << '\n';
  }
  out << "c " << model.constant << '\n';
  out.precision(old);
}

}  // namespace wflo
