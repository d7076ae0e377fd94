#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "wflo/farm_domain.hpp"
#include "wflo/qip_mrf.hpp"
#include "wflo/wake_jensen.hpp"

namespace testutil {

// Cells on a north-south line, `spacing` apart, index 0 northernmost.
inline wflo::FarmGrid line_grid(std::size_t n, double spacing) {
  std::vector<wflo::Cell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    cells.push_back({i, {0.0, -static_cast<double>(i) * spacing}});
  }
  const double len = static_cast<double>(n) * spacing;
  return wflo::FarmGrid(cells, spacing, {-spacing / 2, -len + spacing / 2, spacing / 2,
                                         spacing / 2});
}

inline std::shared_ptr<const wflo::InteractionMatrix> random_matrix(std::size_t n,
                                                                    std::mt19937_64& rng,
                                                                    double density = 1.0) {
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::bernoulli_distribution keep(density);
  wflo::InteractionMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && keep(rng)) w(i, j) = val(rng);
    }
  }
  return std::make_shared<const wflo::InteractionMatrix>(std::move(w));
}

inline wflo::Layout bits_layout(std::size_t n, std::uint64_t mask) {
  wflo::Layout x(n);
  for (std::size_t i = 0; i < n; ++i) x.set(i, (mask >> i) & 1u);
  return x;
}

// Direct evaluation of X^T W X + beta (sum X - K)^2.
inline double lagrangian(const wflo::InteractionMatrix& w, const wflo::Layout& x, std::size_t k,
                         double beta) {
  double quad = 0.0;
  double count = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!x[i]) continue;
    count += 1.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (x[j]) quad += w(i, j);
    }
  }
  const double miss = count - static_cast<double>(k);
  return quad + beta * miss * miss;
}

// Minimum of an MRF energy by enumerating all 2^n assignments.
inline double exhaustive_min(const wflo::MrfModel& m) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.n_vertices); ++mask) {
    const auto x = bits_layout(m.n_vertices, mask);
    double e = m.constant;
    for (std::size_t s = 0; s < m.n_vertices; ++s) e += m.unary[s][x[s] ? 1 : 0];
    for (const auto& t : m.edges) e += t.phi[2 * (x[t.s] ? 1 : 0) + (x[t.t] ? 1 : 0)];
    best = std::min(best, e);
  }
  return best;
}

// Random MRF with unaries and edges drawn from [-1, 1].
inline wflo::MrfModel random_mrf(std::size_t n, double edge_prob, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution has(edge_prob);
  wflo::MrfModel m;
  m.n_vertices = n;
  for (std::size_t s = 0; s < n; ++s) m.unary.push_back({val(rng), val(rng)});
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (has(rng)) m.edges.push_back({s, t, {val(rng), val(rng), val(rng), val(rng)}});
    }
  }
  return m;
}

// Random tree: vertex v > 0 attaches to a uniformly chosen earlier vertex.
inline wflo::MrfModel random_tree(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  wflo::MrfModel m;
  m.n_vertices = n;
  for (std::size_t s = 0; s < n; ++s) m.unary.push_back({val(rng), val(rng)});
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    m.edges.push_back({parent(rng), v, {val(rng), val(rng), val(rng), val(rng)}});
  }
  std::sort(m.edges.begin(), m.edges.end(),
            [](const auto& a, const auto& b) { return std::pair(a.s, a.t) < std::pair(b.s, b.t); });
  return m;
}

// Three vertices, every edge rewarding disagreement: LP bound -3, integral minimum -2.
inline wflo::MrfModel frustrated_triangle() {
  wflo::MrfModel m;
  m.n_vertices = 3;
  m.unary.assign(3, {0.0, 0.0});
  const std::array<double, 4> disagree = {0.0, -1.0, -1.0, 0.0};
  m.edges = {{0, 1, disagree}, {0, 2, disagree}, {1, 2, disagree}};
  return m;
}

}  // namespace testutil
