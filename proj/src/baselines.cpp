#include "wflo/baselines.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "wflo/decode_round.hpp"
#include "wflo/error.hpp"

namespace wflo {

namespace {

double binomial(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

std::vector<std::vector<char>> conflict_table(const QipModel& qip) {
  const std::size_t n = qip.size();
  std::vector<std::vector<char>> conflict;
  if (qip.exclusions.empty()) return conflict;
  conflict.assign(n, std::vector<char>(n, 0));
  for (const auto& [i, j] : qip.exclusions.pairs) conflict[i][j] = conflict[j][i] = 1;
  return conflict;
}

// Depth-first enumeration of increasing index tuples. `visit` sees each
// complete feasible tuple together with its incrementally summed energy.
template <typename Visit>
void enumerate(const QipModel& qip, double budget, Visit&& visit) {
  const std::size_t n = qip.size();
  const std::size_t k = qip.k;
  if (k > n) throw Error("K exceeds the number of cells");
  const double total = binomial(n, k);
  if (total > budget) {
    throw Error("brute force would enumerate " + std::to_string(total) +
                " layouts, above the budget of " + std::to_string(budget));
  }
  const auto& w = *qip.w;
  const auto conflict = conflict_table(qip);
  std::vector<std::size_t> pick(k);
  std::vector<double> energy(k + 1, 0.0);

  auto recurse = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
    if (depth == k) {
      visit(pick, energy[k]);
      return;
    }
    for (std::size_t c = from; c + (k - depth) <= n; ++c) {
      bool ok = true;
      double add = 0.0;
      for (std::size_t d = 0; d < depth; ++d) {
        if (!conflict.empty() && conflict[pick[d]][c]) {
          ok = false;
          break;
        }
        add += w(pick[d], c) + w(c, pick[d]);
      }
      if (!ok) continue;
      pick[depth] = c;
      energy[depth + 1] = energy[depth] + add;
      self(self, depth + 1, c + 1);
    }
  };
  recurse(recurse, 0, 0);
}

}  // namespace

BaselineResult brute_force(const QipModel& qip, double budget) {
  if (!qip.w) throw Error("brute force needs an interaction matrix");
  BaselineResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_pick;
  bool found = false;
  enumerate(qip, budget, [&](const std::vector<std::size_t>& pick, double value) {
    if (!found || value < best.value) {
      found = true;
      best.value = value;
      best_pick = pick;
    }
  });
  if (!found) throw Error("no feasible layout exists");
  best.layout = Layout::from_indices(qip.size(), best_pick);
  best.value = qip_objective(*qip.w, best.layout);
  return best;
}

BaselineResult brute_force(const QipModel& qip, const std::function<double(const Layout&)>& cost,
                           double budget) {
  if (!qip.w) throw Error("brute force needs an interaction matrix");
  BaselineResult best;
  bool found = false;
  enumerate(qip, budget, [&](const std::vector<std::size_t>& pick, double) {
    const Layout x = Layout::from_indices(qip.size(), pick);
    const double value = cost(x);
    if (!found || value < best.value) {
      found = true;
      best.value = value;
      best.layout = x;
    }
  });
  if (!found) throw Error("no feasible layout exists");
  return best;
}

Layout greedy_construct(const QipModel& qip) {
  if (!qip.w) throw Error("greedy construction needs an interaction matrix");
  const auto& w = *qip.w;
  const std::size_t n = w.size();
  const auto conflict = conflict_table(qip);
  Layout x(n);
  std::vector<double> cost(n, 0.0);
  std::vector<char> blocked(n, 0);
  for (std::size_t placed = 0; placed < qip.k; ++placed) {
    std::size_t pick = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (x[c] || blocked[c]) continue;
      if (pick == n || cost[c] < cost[pick]) pick = c;
    }
    if (pick == n) {
      throw Error("greedy construction placed " + std::to_string(placed) + " of " +
                  std::to_string(qip.k) + " turbines before running out of cells");
    }
    x.set(pick, true);
    for (std::size_t j = 0; j < n; ++j) {
      cost[j] += w(pick, j) + w(j, pick);
      if (!conflict.empty() && conflict[pick][j]) blocked[j] = 1;
    }
  }
  return x;
}

namespace {

// Random order, then take every compatible cell until K are placed.
bool random_feasible(const QipModel& qip, const std::vector<std::vector<char>>& conflict,
                     std::mt19937_64& rng, Layout& out) {
  const std::size_t n = qip.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  Layout x(n);
  std::vector<std::size_t> taken;
  for (std::size_t c : order) {
    if (taken.size() == qip.k) break;
    bool ok = true;
    if (!conflict.empty()) {
      for (std::size_t t : taken) {
        if (conflict[c][t]) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    taken.push_back(c);
    x.set(c, true);
  }
  if (taken.size() != qip.k) return false;
  out = std::move(x);
  return true;
}

}  // namespace

BaselineResult local_search(const QipModel& qip, std::size_t restarts, std::uint64_t seed) {
  if (restarts == 0) throw Error("local search needs at least one restart");
  const auto& w = *qip.w;
  BaselineResult best;
  best.layout = repair_swap(greedy_construct(qip), qip);
  best.value = qip_objective(w, best.layout);

  const auto conflict = conflict_table(qip);
  std::mt19937_64 rng(seed);
  for (std::size_t r = 1; r < restarts; ++r) {
    Layout start;
    bool drawn = false;
    for (int attempt = 0; attempt < 100 && !drawn; ++attempt) {
      drawn = random_feasible(qip, conflict, rng, start);
    }
    if (!drawn) continue;
    Layout x = repair_swap(start, qip);
    const double value = qip_objective(w, x);
    if (value < best.value) {
      best.value = value;
      best.layout = std::move(x);
    }
  }
  return best;
}

}  // namespace wflo
