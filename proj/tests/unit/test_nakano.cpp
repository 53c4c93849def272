#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vexp/errors.hpp"
#include "vexp/nakano.hpp"

using namespace vexp;

namespace {

const Grid1D unit_grid(0.0, 1.0, 201);

GridFunction constant_fn(const Grid1D& g, double c) {
  return GridFunction::sample(g, [c](double) { return c; });
}

}  // namespace

TEST_CASE("modular") {
  const auto p = ScalarExponentField::affine(2.0, 1.0, 0.0, 1.0);
  CHECK(modular_lp(constant_fn(unit_grid, 1.0), p).value == doctest::Approx(1.0).epsilon(1e-14));
  const auto x = GridFunction::sample(Grid1D(0.0, 1.0, 2001), [](double t) { return t; });
  CHECK(modular_lp(x, ScalarExponentField::constant(2.0, 0.0, 1.0)).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  // sin(pi x)^{2+x} against a 10x finer grid.
  auto f = [](double t) { return std::sin(M_PI * t); };
  const double coarse = modular_lp(GridFunction::sample(Grid1D(0.0, 1.0, 2001), f), p).value;
  const double fine = modular_lp(GridFunction::sample(Grid1D(0.0, 1.0, 20001), f), p).value;
  CHECK(std::fabs(coarse - fine) <= 1e-6);
}

TEST_CASE("modular overflow names the node") {
  const auto u = constant_fn(unit_grid, 1e200);
  CHECK_THROWS_AS(modular_lp(u, ScalarExponentField::constant(3.0, 0.0, 1.0)), OutOfRange);
}

TEST_CASE("luxemburg norm") {
  const auto p = ScalarExponentField::affine(2.0, 1.0, 0.0, 1.0);
  CHECK(luxemburg_norm(constant_fn(unit_grid, 0.0), p) == 0.0);
  CHECK(luxemburg_norm(constant_fn(unit_grid, 1.0), p) == doctest::Approx(1.0).epsilon(1e-10));

  // Discrete oracle on the same nodes.
  const auto x = oracle::nodes(0.0, 1.0, 201);
  const auto w = oracle::trapezoid(0.0, 1.0, 201);
  const auto two = oracle::sample(x, [](double) { return 2.0; });
  const auto q = oracle::sample(x, [](double t) { return 2.0 + t; });
  const double ref = static_cast<double>(oracle::luxemburg(w, two, q));
  CHECK(std::fabs(luxemburg_norm(constant_fn(unit_grid, 2.0), p) - ref) <= 1e-10 * ref);

  // Continuous oracle: int_0^1 c^{2+x} dx = c^2 (c - 1) / log c with c = 2 / lambda.
  const long double lam = oracle::bisect_norm([](long double l) {
    const long double c = 2.0L / l;
    return c == 1.0L ? 1.0L : c * c * (c - 1.0L) / std::log(c);
  });
  const Grid1D fine(0.0, 1.0, 20001);
  CHECK(std::fabs(luxemburg_norm(constant_fn(fine, 2.0), p) - static_cast<double>(lam)) <= 1e-8);
}

TEST_CASE("constant exponent reduces to the classical norm") {
  const Grid1D g(-1.0, 1.0, 301);
  std::mt19937_64 rng(11);
  for (double pc : {1.3, 2.0, 3.5}) {
    const auto u = GridFunction(g, oracle::random_smooth(oracle::nodes(-1.0, 1.0, 301), rng));
    long double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weight(i) * std::pow(std::fabs(u[i]), pc);
    const double classical = static_cast<double>(std::pow(s, 1.0L / pc));
    CHECK(std::fabs(luxemburg_norm(u, ScalarExponentField::constant(pc, -1.0, 1.0)) - classical) <=
          1e-10 * classical);
  }
}

TEST_CASE("conjugate exponent") {
  const auto two = conjugate_exponent(ScalarExponentField::constant(2.0, 0.0, 1.0));
  CHECK(two(0.3) == 2.0);
  const auto three = conjugate_exponent(ScalarExponentField::constant(3.0, 0.0, 1.0));
  CHECK(three(0.3) == doctest::Approx(1.5).epsilon(1e-15));
  const auto p = ScalarExponentField::affine(2.0, 1.0, 0.0, 1.0);
  const auto pc = conjugate_exponent(p, unit_grid);
  for (std::size_t i = 0; i < unit_grid.size(); ++i) {
    const double x = unit_grid.node(i);
    CHECK(std::fabs(1.0 / p(x) + 1.0 / pc(x) - 1.0) <= 1e-15);
  }
  CHECK_THROWS_AS(conjugate_exponent(ScalarExponentField::constant(1.0, 0.0, 1.0)),
                  InvalidExponent);
}

TEST_CASE("norm-modular clauses") {
  const auto one = check_norm_modular(constant_fn(unit_grid, 1.0),
                                      ScalarExponentField::affine(2.0, 1.0, 0.0, 1.0));
  CHECK(one.all_pass());
  CHECK(one.norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(one.modular == doctest::Approx(1.0).epsilon(1e-12));

  // Constant p: modular = norm^p.
  const auto u = GridFunction::sample(unit_grid, [](double x) { return 3.0 * x * (1 - x) + 0.2; });
  const auto r = check_norm_modular(u, ScalarExponentField::constant(2.5, 0.0, 1.0));
  CHECK(r.modular == doctest::Approx(std::pow(r.norm, 2.5)).epsilon(1e-9));

  std::mt19937_64 rng(17);
  std::lognormal_distribution<double> scale(0.0, 1.5);
  const ScalarExponentField p("1.5+sin^2(3x)",
                              [](double x) { return 1.5 + std::pow(std::sin(3.0 * x), 2); },
                              0.0, 1.0, 1.5, 2.5);
  for (int k = 0; k < 100; ++k) {
    const auto v = GridFunction(unit_grid,
                                oracle::random_smooth(oracle::nodes(0.0, 1.0, 201), rng, 5,
                                                      scale(rng)));
    const auto rep = check_norm_modular(v, p);
    for (const auto& c : rep.clauses) {
      if (c.applicable) CHECK_MESSAGE(c.slack >= -1e-9, c.name);
    }
  }
}

TEST_CASE("Hoelder pairing") {
  const auto p2 = ScalarExponentField::constant(2.0, 0.0, 1.0);
  const auto u = GridFunction::sample(unit_grid, [](double x) { return 1.0 + x; });
  const auto zero = constant_fn(unit_grid, 0.0);
  const auto z = holder_pairing(u, zero, p2);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs_factor2 == 0.0);

  const auto same = holder_pairing(u, u, p2);
  const double n2 = modular_lp(u, p2).value;
  CHECK(same.lhs == doctest::Approx(n2).epsilon(1e-12));
  CHECK(same.rhs_factor2 == doctest::Approx(2.0 * n2).epsilon(1e-9));
  CHECK(same.rhs_sharp == doctest::Approx(n2).epsilon(1e-9));

  std::mt19937_64 rng(23);
  const auto p = ScalarExponentField::affine(2.0, 1.0, 0.0, 1.0);
  const auto x = oracle::nodes(0.0, 1.0, 201);
  for (int k = 0; k < 100; ++k) {
    const GridFunction a(unit_grid, oracle::random_smooth(x, rng));
    const GridFunction b(unit_grid, oracle::random_smooth(x, rng));
    const auto h = holder_pairing(a, b, p);
    CHECK(h.lhs <= h.rhs_sharp * (1 + 1e-9));
    CHECK(h.rhs_sharp <= h.rhs_factor2 * (1 + 1e-12));
  }
}

TEST_CASE("power norm relation") {
  const auto p2 = ScalarExponentField::constant(2.0, 0.0, 1.0);
  const auto ones = constant_fn(unit_grid, 1.0);
  const auto one = power_norm_relation(ones, p2, ScalarExponentField::constant(1.7, 0.0, 1.0));
  CHECK(one.norm_pq == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(one.norm_power == doctest::Approx(1.0).epsilon(1e-10));

  // Constant q: | |u|^q |_p = |u|_{pq}^q.
  const auto u = GridFunction::sample(unit_grid, [](double x) { return 0.4 + std::sin(4 * x); });
  const auto c = power_norm_relation(u, p2, ScalarExponentField::constant(1.5, 0.0, 1.0));
  CHECK(c.norm_power == doctest::Approx(std::pow(c.norm_pq, 1.5)).epsilon(1e-9));
  CHECK(c.all_pass());

  std::mt19937_64 rng(29);
  const auto q = ScalarExponentField::affine(1.0, 0.5, 0.0, 1.0);
  const auto x = oracle::nodes(0.0, 1.0, 201);
  std::lognormal_distribution<double> scale(0.0, 1.5);
  for (int k = 0; k < 100; ++k) {
    const GridFunction v(unit_grid, oracle::random_smooth(x, rng, 4, scale(rng)));
    CHECK(power_norm_relation(v, p2, q).all_pass());
  }
}

TEST_CASE("norm and modular vanish together") {
  const auto p = ScalarExponentField::affine(1.5, 1.0, 0.0, 1.0);
  const auto u = GridFunction::sample(unit_grid, [](double x) { return 5.0 * std::cos(x); });
  double prev = 1e300;
  for (int n : {1, 10, 100, 1000, 10000}) {
    const auto un = u.scaled(1.0 / n);
    const double m = modular_lp(un, p).value;
    const double nn = luxemburg_norm(un, p);
    CHECK(nn < prev);
    prev = nn;
    if (n == 10000) {
      CHECK(m < 1e-5);
      CHECK(nn < 1e-2);
    }
  }
}
