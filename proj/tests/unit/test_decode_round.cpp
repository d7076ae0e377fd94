#include <doctest.h>

#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "wflo/baselines.hpp"
#include "wflo/decode_round.hpp"
#include "wflo/error.hpp"
#include "wflo/tightening.hpp"
#include "wflo/wind_resource.hpp"

using namespace wflo;

namespace {

SolveReport with_marginals(std::vector<std::array<double, 2>> mm) {
  SolveReport r;
  r.min_marginals = std::move(mm);
  return r;
}

std::shared_ptr<const InteractionMatrix> line_matrix(std::size_t n) {
  return std::make_shared<const InteractionMatrix>(build_interaction_matrix(
      testutil::line_grid(n, 200.0), builtin_wr1(), mosetti_turbine(), WakeParams{}));
}

// Single-turbine moves that keep feasibility and lower X^T W X.
bool is_swap_local_minimum(const QipModel& q, const Layout& x) {
  for (std::size_t a : x.selected()) {
    for (std::size_t b = 0; b < x.size(); ++b) {
      if (x[b]) continue;
      Layout y = x;
      y.set(a, false);
      y.set(b, true);
      if (is_feasible(q, y) && qip_objective(*q.w, y) < qip_objective(*q.w, x) - 1e-12) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("rounding edge cases") {
  const auto r = with_marginals({{0, 1}, {1, 0}, {0, 0}});
  CHECK(round_top_k(r, 0, {}).count() == 0);
  CHECK(round_top_k(r, 3, {}).count() == 3);
  CHECK_THROWS_AS(round_top_k(r, 4, {}), Error);
}

TEST_CASE("rounding ranks by advantage and breaks ties by index") {
  const auto r = with_marginals({{0, 0}, {2, 0}, {1, 0}, {2, 0}});
  CHECK(round_top_k(r, 1, {}).selected() == std::vector<std::size_t>{1});
  CHECK(round_top_k(r, 2, {}).selected() == std::vector<std::size_t>{1, 3});
  CHECK(round_top_k(r, 3, {}).selected() == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("rounding skips excluded cells") {
  const auto r = with_marginals({{0, 0}, {2, 0}, {1, 0}, {2, 0}});
  ProximityPairs p;
  p.pairs = {{1, 3}};
  CHECK(round_top_k(r, 2, p).selected() == std::vector<std::size_t>{1, 2});
  p.pairs = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK_THROWS_AS(round_top_k(r, 2, p), Error);
}

TEST_CASE("rounding against the brute-force optimum on a 16-cell line") {
  const auto w = line_matrix(16);
  for (std::size_t k = 1; k <= 4; ++k) {
    const QipModel q = make_qip(w, k);
    const MrfModel m = build_penalized_mrf(q, default_beta(*w, k));
    const auto [tightened, report] = tighten_and_resolve(m, SolverConfig{}, TighteningConfig{});
    const BaselineResult oracle = brute_force(q);
    const Layout rounded = round_top_k(report, k, {});
    CHECK(rounded.count() == k);
    // The penalized relaxation is loose on these instances, so exact agreement
    // is only asserted when the bound happens to certify the optimum.
    if (mrf_energy(m, oracle.layout) - report.lower_bound() < 1e-9) {
      CHECK(qip_objective(*w, rounded) == doctest::Approx(oracle.value).epsilon(1e-9));
    }
    const Layout repaired = repair_swap(rounded, q);
    CHECK(qip_objective(*w, repaired) <= oracle.value * 1.05 + 1e-12);
  }
}

TEST_CASE("repair on three cells in a line") {
  const auto w = line_matrix(3);
  const QipModel q = make_qip(w, 2);
  const Layout start = Layout::from_indices(3, std::vector<std::size_t>{0, 1});
  CHECK(qip_objective(*w, start) == doctest::Approx(0.320385).epsilon(1e-5));
  const Layout out = repair_swap(start, q);
  CHECK(out.selected() == std::vector<std::size_t>{0, 2});
  CHECK(qip_objective(*w, out) == doctest::Approx(0.063285).epsilon(1e-5));
  CHECK(repair_swap(out, q) == out);
}

TEST_CASE("repair reaches a swap local minimum and never increases energy") {
  const FarmGrid g = make_square_grid(800, 4);
  const auto w = std::make_shared<const InteractionMatrix>(build_interaction_matrix(
      g, load_rose(std::filesystem::path(WFLO_DATA_DIR) / "wr36.csv"), mosetti_turbine(),
      WakeParams{}));
  ProximityPairs excl;
  excl.pairs = {{0, 5}, {2, 3}, {10, 15}};
  const QipModel q = make_qip(w, 3, excl);
  std::mt19937_64 rng(3);
  int trials = 0;
  while (trials < 40) {
    std::vector<std::size_t> cells(16);
    for (std::size_t i = 0; i < 16; ++i) cells[i] = i;
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(3);
    const Layout start = Layout::from_indices(16, cells);
    if (!is_feasible(q, start)) continue;
    ++trials;
    const Layout out = repair_swap(start, q);
    CHECK(is_feasible(q, out));
    CHECK(qip_objective(*w, out) <= qip_objective(*w, start) + 1e-15);
    CHECK(is_swap_local_minimum(q, out));
  }
}

TEST_CASE("repair respects the pass limit and rejects infeasible input") {
  const auto w = line_matrix(3);
  const QipModel q = make_qip(w, 2);
  const Layout start = Layout::from_indices(3, std::vector<std::size_t>{0, 1});
  CHECK(repair_swap(start, q, 0) == start);
  CHECK_THROWS_AS(repair_swap(Layout::from_indices(3, std::vector<std::size_t>{0}), q), Error);
}

TEST_CASE("count fixing adds the cheapest and drops the costliest cells") {
  const auto w = line_matrix(3);
  const QipModel q = make_qip(w, 2);
  // Cell 1 sits between the other two, so it carries both 200 m wakes.
  CHECK(fix_count(Layout(3), q).selected() == std::vector<std::size_t>{0, 2});
  CHECK(fix_count(Layout::from_indices(3, std::vector<std::size_t>{0, 1, 2}), q).selected() ==
        std::vector<std::size_t>{0, 2});
  const Layout ok = Layout::from_indices(3, std::vector<std::size_t>{0, 1});
  CHECK(fix_count(ok, q) == ok);
}

TEST_CASE("count fixing resolves exclusion conflicts") {
  const auto w = line_matrix(3);
  ProximityPairs p;
  p.pairs = {{0, 1}};
  const QipModel q = make_qip(w, 2, p);
  const Layout out = fix_count(Layout::from_indices(3, std::vector<std::size_t>{0, 1}), q);
  CHECK(is_feasible(q, out));
  p.pairs = {{0, 1}, {0, 2}, {1, 2}};
  CHECK_THROWS_AS(fix_count(Layout(3), make_qip(w, 2, p)), Error);
}

TEST_CASE("decode and repair is feasible and no worse than repaired rounding") {
  const auto w = line_matrix(16);
  for (std::size_t k = 1; k <= 4; ++k) {
    const QipModel q = make_qip(w, k);
    const MrfModel m = build_penalized_mrf(q, default_beta(*w, k));
    const SolveReport report = run(m, SolverConfig{});
    const Layout out = decode_and_repair(report, q);
    CHECK(is_feasible(q, out));
    CHECK(qip_objective(*w, out) <=
          qip_objective(*w, repair_swap(round_top_k(report, k, {}), q)) + 1e-15);
    CHECK(is_swap_local_minimum(q, out));
  }
}

TEST_CASE("layout CSV round-trip") {
  const FarmGrid g = make_square_grid(2000, 10);
  const Layout x = Layout::from_indices(100, std::vector<std::size_t>{3, 40, 99});
  const auto path = std::filesystem::temp_directory_path() / "wflo_layout.csv";
  write_layout_csv(x, g, path);
  CHECK(read_layout_csv(path, g) == x);
  CHECK_THROWS_AS(read_layout_csv(path, make_square_grid(1000, 5)), Error);
}
