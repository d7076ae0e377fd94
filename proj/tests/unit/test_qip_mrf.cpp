#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "wflo/error.hpp"
#include "wflo/qip_mrf.hpp"

using namespace wflo;
using testutil::bits_layout;

namespace {

QipModel zero_qip(std::size_t n, std::size_t k) {
  return make_qip(std::make_shared<const InteractionMatrix>(n), k);
}

}  // namespace

TEST_CASE("penalty energies on two cells") {
  const MrfModel m = build_penalized_mrf(zero_qip(2, 1), 1.0);
  CHECK(mrf_energy(m, bits_layout(2, 0b00)) == doctest::Approx(1.0));
  CHECK(mrf_energy(m, bits_layout(2, 0b01)) == doctest::Approx(0.0));
  CHECK(mrf_energy(m, bits_layout(2, 0b10)) == doctest::Approx(0.0));
  CHECK(mrf_energy(m, bits_layout(2, 0b11)) == doctest::Approx(1.0));
}

TEST_CASE("penalty energies on three cells") {
  const MrfModel m = build_penalized_mrf(zero_qip(3, 2), 1.0);
  for (std::uint64_t mask : {0b011u, 0b101u, 0b110u}) {
    CHECK(mrf_energy(m, bits_layout(3, mask)) == doctest::Approx(0.0));
  }
  CHECK(mrf_energy(m, bits_layout(3, 0b111)) == doctest::Approx(1.0));
  CHECK(mrf_energy(m, Layout(3)) == doctest::Approx(4.0));  // beta K^2
}

TEST_CASE("model coefficients") {
  std::mt19937_64 rng(11);
  const auto w = testutil::random_matrix(4, rng);
  const double beta = 2.5;
  const MrfModel m = build_penalized_mrf(make_qip(w, 3), beta);
  CHECK(m.constant == doctest::Approx(beta * 9));
  for (const auto& u : m.unary) {
    CHECK(u[0] == 0.0);
    CHECK(u[1] == doctest::Approx(beta * (1 - 6)));
  }
  CHECK(m.edges.size() == 6);
  for (const auto& e : m.edges) {
    CHECK(e.s < e.t);
    CHECK(e.phi[0] == 0.0);
    CHECK(e.phi[1] == 0.0);
    CHECK(e.phi[2] == 0.0);
    CHECK(e.phi[3] == doctest::Approx((*w)(e.s, e.t) + (*w)(e.t, e.s) + 2 * beta));
  }
  CHECK_THROWS_AS(build_penalized_mrf(make_qip(w, 3), 0.0), Error);
}

TEST_CASE("energy equals the penalized quadratic form on random instances") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> beta_dist(0.01, 50.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = size(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    const auto w = testutil::random_matrix(n, rng, 0.6);
    const double beta = beta_dist(rng);
    const MrfModel m = build_penalized_mrf(make_qip(w, k), beta);
    const auto mask = std::uniform_int_distribution<std::uint64_t>(0, (1u << n) - 1)(rng);
    const Layout x = bits_layout(n, mask);
    const double ref = testutil::lagrangian(*w, x, k, beta);
    CHECK(std::abs(mrf_energy(m, x) - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("feasible energy differences do not depend on beta") {
  std::mt19937_64 rng(8);
  const auto w = testutil::random_matrix(6, rng);
  const QipModel q = make_qip(w, 2);
  const Layout a = bits_layout(6, 0b000011), b = bits_layout(6, 0b100100);
  const double d1 = mrf_energy(build_penalized_mrf(q, 1.0), a) - mrf_energy(build_penalized_mrf(q, 1.0), b);
  const double d2 = mrf_energy(build_penalized_mrf(q, 40.0), a) - mrf_energy(build_penalized_mrf(q, 40.0), b);
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
  CHECK(d1 == doctest::Approx(qip_objective(*w, a) - qip_objective(*w, b)).epsilon(1e-12));
}

TEST_CASE("default beta makes every minimizer place exactly K") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    const auto w = testutil::random_matrix(n, rng);
    const QipModel q = make_qip(w, k);
    const MrfModel m = build_penalized_mrf(q, default_beta(*w, k));
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> argmins;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const double e = mrf_energy(m, bits_layout(n, mask));
      if (e < best - 1e-12) {
        best = e;
        argmins = {mask};
      } else if (std::abs(e - best) <= 1e-12) {
        argmins.push_back(mask);
      }
    }
    for (auto mask : argmins) CHECK(bits_layout(n, mask).count() == k);
  }
}

TEST_CASE("exclusion penalties") {
  std::mt19937_64 rng(2);
  const auto w = testutil::random_matrix(4, rng);
  const MrfModel base = build_penalized_mrf(make_qip(w, 2), 1.0);
  const MrfModel same = add_exclusions(base, {}, 1e6);
  CHECK(same.edges.size() == base.edges.size());

  ProximityPairs p;
  p.pairs = {{1, 3}};
  const MrfModel ex = add_exclusions(base, p, 1e6);
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    const Layout x = bits_layout(4, mask);
    const double extra = (x[1] && x[3]) ? 1e6 : 0.0;
    CHECK(mrf_energy(ex, x) == doctest::Approx(mrf_energy(base, x) + extra));
  }

  // An exclusion on a pair without an edge creates the edge.
  MrfModel sparse;
  sparse.n_vertices = 3;
  sparse.unary.assign(3, {0.0, 0.0});
  const MrfModel created = add_exclusions(sparse, {{{0, 2}}, 1.0}, 5.0);
  REQUIRE(created.edges.size() == 1);
  CHECK(created.edges[0].phi[3] == 5.0);
}

TEST_CASE("layout and objective basics") {
  const std::vector<std::size_t> idx = {0, 2};
  const Layout x = Layout::from_indices(4, idx);
  CHECK(x.count() == 2);
  CHECK(x.selected() == idx);
  InteractionMatrix w(4);
  w(0, 2) = 1.5;
  w(2, 0) = 0.5;
  w(1, 0) = 9.0;
  CHECK(qip_objective(w, x) == doctest::Approx(2.0));
  CHECK_THROWS_AS(mrf_energy(build_penalized_mrf(zero_qip(3, 1), 1.0), x), Error);
  CHECK_THROWS_AS(make_qip(std::make_shared<const InteractionMatrix>(3), 4), Error);
}

TEST_CASE("feasibility") {
  const auto w = std::make_shared<const InteractionMatrix>(4);
  const QipModel q = make_qip(w, 2, {{{0, 1}}, 1.0});
  CHECK(is_feasible(q, bits_layout(4, 0b0101)));
  CHECK_FALSE(is_feasible(q, bits_layout(4, 0b0011)));
  CHECK_FALSE(is_feasible(q, bits_layout(4, 0b0111)));
}

TEST_CASE("model text dump") {
  const MrfModel m = build_penalized_mrf(zero_qip(2, 1), 1.0);
  std::ostringstream out;
  write_model_text(m, out);
  const std::string s = out.str();
  CHECK(s.find("u 0 ") == 0);
  CHECK(s.find("e 0 1 ") != std::string::npos);
  CHECK(s.find("c ") != std::string::npos);
}
