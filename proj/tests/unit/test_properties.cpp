// Randomized checks of structural invariants.

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vexp/choquard.hpp"
#include "vexp/nakano.hpp"
#include "vexp/sobolev.hpp"

using namespace vexp;

namespace {

const Grid1D grid(-1.0, 1.0, 121);
const auto xs = oracle::nodes(-1.0, 1.0, 121);

}  // namespace

TEST_CASE("Luxemburg norm: homogeneity, unit ball, monotonicity") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const ScalarExponentField p("1.4+x^2", [](double x) { return 1.4 + x * x; }, -1.0, 1.0, 1.4, 2.4);
  for (int k = 0; k < 40; ++k) {
    const GridFunction u(grid, oracle::random_smooth(xs, rng, 5, 3.0));
    const double n = luxemburg_norm(u, p);
    REQUIRE(n > 0.0);
    CHECK(std::fabs(modular_lp(u.scaled(1.0 / n), p).value - 1.0) <= 1e-9);
    for (double c : {-7.5, -1e-2, 0.3, 40.0}) {
      CHECK(std::fabs(luxemburg_norm(u.scaled(c), p) - std::fabs(c) * n) <=
            10 * 1e-10 * std::fabs(c) * n + 1e-300);
    }
    // |u| <= |v| nodewise.
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] * (1.0 + u01(rng)) * (u01(rng) < 0.5 ? -1 : 1);
    CHECK(n <= luxemburg_norm(GridFunction(grid, v), p) + 1e-10);
  }
}

TEST_CASE("Sobolev norm: homogeneity and unit ball") {
  std::mt19937_64 rng(103);
  const PairTable table(grid, fixture::default_bundle());
  for (int k = 0; k < 10; ++k) {
    const GridFunction u(grid, oracle::random_smooth(xs, rng, 4, 2.0), true);
    const double n = sobolev_norm(u, table);
    CHECK(std::fabs(gagliardo_modular(u, table, n).total - 1.0) <= 1e-9);
    CHECK(std::fabs(sobolev_norm(u.scaled(-3.0), table) - 3.0 * n) <= 10 * 1e-10 * 3.0 * n);
    CHECK(seminorm(u, table) <= n);
  }
}

TEST_CASE("energy invariants under random inputs") {
  std::mt19937_64 rng(107);
  const ChoquardEnergy E(grid, fixture::default_bundle());
  for (int k = 0; k < 20; ++k) {
    auto u = oracle::random_smooth(xs, rng, 4, 2.0);
    const auto t = E.terms(u);
    CHECK(t.gagliardo_energy >= 0.0);
    CHECK(t.lp_energy >= 0.0);
    CHECK(t.choquard_energy >= 0.0);
    std::vector<double> neg(u);
    for (auto& v : neg) v = -v;
    CHECK(E.energy(neg) == doctest::Approx(E.energy(u)).epsilon(1e-14));
    const auto g = E.gradient(u);
    const auto gn = E.gradient(neg);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(gn[i] == doctest::Approx(-g[i]).epsilon(1e-12).scale(1e-12));
  }
}

TEST_CASE("r on the lower edge is admitted") {
  auto b = fixture::default_bundle();
  b.r = hls_lower_field(b);
  CHECK(validate_r_range(b, grid).ok);
}
