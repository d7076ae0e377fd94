#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "wflo/error.hpp"
#include "wflo/farm_domain.hpp"

using namespace wflo;

TEST_CASE("square grids") {
  struct Case {
    double side;
    std::size_t per_side;
    std::size_t cells;
    double cell;
  };
  for (const Case c : {Case{7000, 10, 100, 700}, Case{7000, 50, 2500, 140},
                       Case{2000, 10, 100, 200}}) {
    const FarmGrid g = make_square_grid(c.side, c.per_side);
    CHECK(g.size() == c.cells);
    CHECK(g.cell_side() == doctest::Approx(c.cell));
  }
  const FarmGrid g = make_square_grid(2000, 10);
  CHECK(g.centroid(0).x == doctest::Approx(100));
  CHECK(g.centroid(0).y == doctest::Approx(100));
  CHECK(g.centroid(13).x == doctest::Approx(700));  // column 3
  CHECK(g.centroid(13).y == doctest::Approx(300));  // row 1
  CHECK_THROWS_AS(make_square_grid(2000, 0), Error);
}

TEST_CASE("five-radius exclusions on 700 m cells are empty") {
  TurbineSpec spec;
  spec.rotor_radius = 63;
  CHECK(proximity_pairs(make_square_grid(7000, 10), spec).empty());
  CHECK(proximity_pairs(make_square_grid(7000, 20), spec).empty());  // 350 m cells
}

TEST_CASE("five-radius exclusions on 140 m cells") {
  TurbineSpec spec;
  spec.rotor_radius = 63;
  const FarmGrid g = make_square_grid(7000, 50);
  const ProximityPairs p = proximity_pairs(g, spec);
  CHECK(p.min_separation == doctest::Approx(315.0));

  // Offsets seen from an interior cell, independent of the pair list.
  const std::size_t centre = 25 * 50 + 25;
  std::set<std::pair<long, long>> offsets;
  for (const auto& [i, j] : p.pairs) {
    CHECK(i < j);
    if (i != centre && j != centre) continue;
    const std::size_t other = i == centre ? j : i;
    const long dc = static_cast<long>(other % 50) - 25;
    const long dr = static_cast<long>(other / 50) - 25;
    offsets.insert({std::abs(dc), std::abs(dr)});
  }
  CHECK(offsets.count({1, 0}));
  CHECK(offsets.count({1, 1}));
  CHECK(offsets.count({2, 0}));
  CHECK(offsets.count({2, 1}));
  CHECK_FALSE(offsets.count({2, 2}));
  CHECK_FALSE(offsets.count({3, 0}));

  // Every listed pair is strictly closer than 5R, and the count matches a direct scan.
  std::size_t expected = 0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      const double d = std::hypot(g.centroid(a).x - g.centroid(b).x,
                                  g.centroid(a).y - g.centroid(b).y);
      if (d < 315.0) ++expected;
    }
  }
  CHECK(p.pairs.size() == expected);
}

TEST_CASE("zero separation gives no pairs") {
  CHECK(proximity_pairs(make_square_grid(2000, 10), 0.0).empty());
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(FarmGrid({{1, {0, 0}}}, 1.0, {}), Error);
  CHECK_THROWS_AS(FarmGrid({{0, {0, 0}}, {1, {0, 0}}}, 1.0, {}), Error);
}

TEST_CASE("speed tables") {
  const SpeedTable t({3, 5, 7}, {0, 10, 30});
  CHECK(t.interpolate(5) == 10);
  CHECK(t.interpolate(6) == doctest::Approx(20));
  CHECK(t.interpolate(1) == 0);
  CHECK(t.interpolate(9) == 30);
  CHECK_THROWS_AS(SpeedTable({3, 3}, {0, 1}), Error);
  CHECK_THROWS_AS(SpeedTable({}, {}), Error);
}

TEST_CASE("bundled NREL 5-MW tables load") {
  const PowerCurve p(load_speed_table(std::filesystem::path(WFLO_DATA_DIR) / "nrel5mw_power.csv"));
  CHECK(p.cut_in() == 3.0);
  CHECK(p.cut_out() == 25.0);
  CHECK(p.rated_power() == 5000.0);
  const auto& v = p.table().values();
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);

  TurbineSpec spec;
  spec.rotor_radius = 63;
  spec.thrust = load_speed_table(std::filesystem::path(WFLO_DATA_DIR) / "nrel5mw_thrust.csv");
  spec.power = p;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.thrust_at(8.0) > 0.0);
}

TEST_CASE("turbine validation") {
  TurbineSpec spec = mosetti_turbine();
  CHECK_NOTHROW(spec.validate());
  spec.thrust = 1.2;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = mosetti_turbine();
  spec.rotor_radius = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
}
