#include "wflo/decode_round.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "csv_util.hpp"
#include "wflo/error.hpp"

namespace wflo {

namespace {

std::vector<std::vector<std::size_t>> exclusion_lists(std::size_t n,
                                                      const ProximityPairs& exclusions) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [i, j] : exclusions.pairs) {
    if (i >= n || j >= n) throw Error("exclusion pair references a cell outside the layout");
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

}  // namespace

Layout round_top_k(const SolveReport& report, std::size_t k, const ProximityPairs& exclusions) {
  const auto& mm = report.min_marginals;
  const std::size_t n = mm.size();
  if (k > n) throw Error("cannot place " + std::to_string(k) + " turbines in " +
                         std::to_string(n) + " cells");
  Layout out(n);
  if (k == 0) return out;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mm[a][0] - mm[a][1] > mm[b][0] - mm[b][1];
  });

  const auto adj = exclusion_lists(n, exclusions);
  std::vector<char> blocked(n, 0);
  std::size_t placed = 0;
  for (std::size_t s : order) {
    if (blocked[s]) continue;
    out.set(s, true);
    for (std::size_t t : adj[s]) blocked[t] = 1;
    if (++placed == k) return out;
  }
  throw Error("rounding found only " + std::to_string(placed) + " compatible cells, needed " +
              std::to_string(k));
}

Layout repair_swap(const Layout& layout, const QipModel& qip, std::size_t max_passes) {
  if (!qip.w) throw Error("repair_swap needs an interaction matrix");
  if (!is_feasible(qip, layout)) throw Error("repair_swap needs a feasible starting layout");
  const auto& w = *qip.w;
  const std::size_t n = w.size();
  const auto adj = exclusion_lists(n, qip.exclusions);

  Layout x = layout;
  // contrib[j] = sum over selected i of (w_ij + w_ji)
  std::vector<double> contrib(n, 0.0);
  std::vector<std::uint32_t> conflicts(n, 0);
  auto apply = [&](std::size_t cell, double sign) {
    for (std::size_t j = 0; j < n; ++j) contrib[j] += sign * (w(cell, j) + w(j, cell));
    for (std::size_t j : adj[cell]) {
      if (sign > 0) ++conflicts[j];
      else --conflicts[j];
    }
  };
  for (std::size_t i : x.selected()) apply(i, 1.0);

  const double scale = std::max(1.0, std::abs(qip_objective(w, x)));
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    const auto on = x.selected();
    double best = -1e-12 * scale;
    std::size_t best_a = n, best_b = n;
    for (std::size_t a : on) {
      for (std::size_t b = 0; b < n; ++b) {
        if (x[b]) continue;
        if (conflicts[b] > 1) continue;
        if (conflicts[b] == 1 && !std::binary_search(adj[b].begin(), adj[b].end(), a)) continue;
        const double delta = contrib[b] - contrib[a] - (w(a, b) + w(b, a));
        if (delta < best) {
          best = delta;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a == n) break;
    apply(best_a, -1.0);
    x.set(best_a, false);
    apply(best_b, 1.0);
    x.set(best_b, true);
  }
  return x;
}

Layout fix_count(const Layout& layout, const QipModel& qip) {
  if (!qip.w) throw Error("fix_count needs an interaction matrix");
  const auto& w = *qip.w;
  const std::size_t n = w.size();
  if (layout.size() != n) throw Error("layout size does not match the interaction matrix");
  const auto adj = exclusion_lists(n, qip.exclusions);

  Layout x = layout;
  std::vector<double> contrib(n, 0.0);
  std::vector<std::size_t> conflicts(n, 0);
  auto apply = [&](std::size_t cell, bool on) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = w(cell, j) + w(j, cell);
      contrib[j] += on ? v : -v;
    }
    for (std::size_t j : adj[cell]) {
      if (on) ++conflicts[j];
      else --conflicts[j];
    }
    x.set(cell, on);
  };
  for (std::size_t i : layout.selected()) {
    x.set(i, false);
    apply(i, true);
  }

  // Drop the costliest cell until no selected pair conflicts and at most k remain.
  for (;;) {
    std::size_t worst = n;
    bool any_conflict = false;
    for (std::size_t i : x.selected()) any_conflict = any_conflict || conflicts[i] > 0;
    if (!any_conflict && x.count() <= qip.k) break;
    for (std::size_t i : x.selected()) {
      if (any_conflict && conflicts[i] == 0) continue;
      if (worst == n || conflicts[i] > conflicts[worst] ||
          (conflicts[i] == conflicts[worst] && contrib[i] > contrib[worst])) {
        worst = i;
      }
    }
    apply(worst, false);
  }
  // Add the cheapest compatible cell until k are placed.
  while (x.count() < qip.k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] || conflicts[i] > 0) continue;
      if (best == n || contrib[i] < contrib[best]) best = i;
    }
    if (best == n) {
      throw Error("no compatible cell left after placing " + std::to_string(x.count()) +
                  " turbines, needed " + std::to_string(qip.k));
    }
    apply(best, true);
  }
  return x;
}

Layout decode_and_repair(const SolveReport& report, const QipModel& qip, std::size_t max_passes) {
  Layout best = repair_swap(round_top_k(report, qip.k, qip.exclusions), qip, max_passes);
  if (report.best_assignment.size() == qip.size()) {
    Layout alt;
    try {
      alt = repair_swap(fix_count(report.best_assignment, qip), qip, max_passes);
    } catch (const Error&) {
      return best;
    }
    if (qip_objective(*qip.w, alt) < qip_objective(*qip.w, best)) best = std::move(alt);
  }
  return best;
}

void write_layout_csv(const Layout& layout, const FarmGrid& grid,
                      const std::filesystem::path& path) {
  if (layout.size() != grid.size()) throw Error("layout size does not match the grid");
  std::ofstream out(path);
  if (!out) throw Error("cannot write layout file " + path.string());
  out << "cell_index,x_m,y_m\n" << std::setprecision(17);
  for (std::size_t i : layout.selected()) {
    const auto& c = grid.centroid(i);
    out << i << ',' << c.x << ',' << c.y << '\n';
  }
}

Layout read_layout_csv(const std::filesystem::path& path, const FarmGrid& grid) {
  const auto rows = detail::read_numeric_csv(path.string(), {"cell_index", "x_m", "y_m"});
  std::vector<std::size_t> idx;
  for (const auto& row : rows) {
    const double v = row.values.at(0);
    if (v < 0 || v != std::floor(v) || v >= static_cast<double>(grid.size())) {
      throw Error(path.string() + ":" + std::to_string(row.line) + ": cell index " +
                  std::to_string(v) + " is outside the grid");
    }
    const auto i = static_cast<std::size_t>(v);
    const auto& c = grid.centroid(i);
    if (std::abs(c.x - row.values.at(1)) > 1e-6 || std::abs(c.y - row.values.at(2)) > 1e-6) {
      throw Error(path.string() + ":" + std::to_string(row.line) +
                  ": coordinates do not match cell " + std::to_string(i));
    }
    idx.push_back(i);
  }
  return Layout::from_indices(grid.size(), idx);
}

}  // namespace wflo
