#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vexp/sobolev.hpp"

using namespace vexp;

TEST_CASE("pair table indexing") {
  const Grid1D g(0.0, 1.0, 7);
  const PairTable t(g, fixture::constant_bundle(2.0, 0.3, 0.5, 2.0));
  std::size_t k = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(t.row_begin(i) == k);
    for (std::size_t j = i + 1; j < g.size(); ++j, ++k) {
      CHECK(t.index(i, j) == k);
      CHECK(t.index(j, i) == k);
    }
  }
  CHECK(t.kernel().size() == k);
}

TEST_CASE("three-node Gagliardo sum") {
  const Grid1D g(0.0, 1.0, 3);
  const auto bundle = fixture::constant_bundle(2.0, 0.25, 0.5, 2.0);
  const auto u = GridFunction::sample(g, [](double x) { return x; });
  const auto m = gagliardo_modular(u, bundle);
  // Two ordered copies of: 2 * (1/8)(1/4) / (1/2)^{3/2} + (1/16) * 1 / 1.
  const double hand = 0.125 * (2.0 * std::sqrt(2.0) + 1.0);
  CHECK(m.gagliardo_term == doctest::Approx(hand).epsilon(1e-15));
  CHECK(m.lp_term == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(m.total == doctest::Approx(hand + 0.375).epsilon(1e-15));

  const auto x = oracle::nodes(0.0, 1.0, 3);
  const auto w = oracle::trapezoid(0.0, 1.0, 3);
  const auto two = [](double, double) { return 2.0; };
  const auto quarter = [](double, double) { return 0.25; };
  const std::vector<double> uv(u.values().begin(), u.values().end());
  const auto ref = oracle::gagliardo(x, w, uv, two, quarter, 1, false);
  CHECK(m.gagliardo_term == doctest::Approx(static_cast<double>(ref)).epsilon(1e-15));
}

TEST_CASE("gagliardo modular matches the direct double loop") {
  const auto bundle = fixture::default_bundle();
  const std::size_t m = 61;
  const Grid1D g(-1.0, 1.0, m);
  const auto x = oracle::nodes(-1.0, 1.0, m);
  const auto w = oracle::trapezoid(-1.0, 1.0, m);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 5; ++k) {
    const auto uv = oracle::random_smooth(x, rng);
    const GridFunction u(g, uv);
    std::vector<double> pd(m);
    for (std::size_t i = 0; i < m; ++i) pd[i] = bundle.p(x[i], x[i]);
    const auto ref_g = oracle::gagliardo(
        x, w, uv, [&](double a, double b) { return bundle.p(a, b); },
        [&](double a, double b) { return bundle.s(a, b); }, 1, false);
    const auto ref_l = oracle::lp_sum(w, uv, pd, false);
    const auto got = gagliardo_modular(u, bundle);
    CHECK(got.gagliardo_term == doctest::Approx(static_cast<double>(ref_g)).epsilon(1e-12));
    CHECK(got.lp_term == doctest::Approx(static_cast<double>(ref_l)).epsilon(1e-12));
  }
}

TEST_CASE("trivial cases") {
  const Grid1D g(0.0, 1.0, 51);
  const auto bundle = fixture::constant_bundle(2.5, 0.3, 0.5, 2.0);
  const auto c = GridFunction::sample(g, [](double) { return -1.7; });
  const auto mc = gagliardo_modular(c, bundle);
  CHECK(mc.gagliardo_term == 0.0);
  CHECK(mc.lp_term == doctest::Approx(std::pow(1.7, 2.5)).epsilon(1e-14));
  CHECK(seminorm(c, bundle) == 0.0);
  const auto lc = flap_apply(c, bundle);
  for (double v : lc.values()) CHECK(v == 0.0);

  const auto z = GridFunction::zeros(g);
  CHECK(gagliardo_modular(z, bundle).total == 0.0);
  CHECK(sobolev_norm(z, bundle) == 0.0);
}

TEST_CASE("norm homogeneity and ordering") {
  const Grid1D g(0.0, 1.0, 101);
  const auto bundle = fixture::constant_bundle(2.0, 0.3, 0.5, 2.0);
  const auto tent = GridFunction::sample(g, [](double x) { return 1.0 - std::fabs(2.0 * x - 1.0); });
  const double n1 = sobolev_norm(tent, bundle);
  CHECK(std::fabs(sobolev_norm(tent.scaled(2.0), bundle) - 2.0 * n1) <= 10 * 1e-10 * n1 + 1e-12);
  CHECK(seminorm(tent, bundle) <= n1);
}

TEST_CASE("tent norm self-converges") {
  const auto bundle = fixture::constant_bundle(2.0, 0.3, 0.5, 2.0);
  auto tent = [](double x) { return 1.0 - std::fabs(2.0 * x - 1.0); };
  const Grid1D coarse(0.0, 1.0, 201), fine(0.0, 1.0, 801);
  const double a = sobolev_norm(GridFunction::sample(coarse, tent), bundle);
  const double b = sobolev_norm(GridFunction::sample(fine, tent), bundle);
  CHECK(std::fabs(a - b) / b <= 0.02);
  const double sa = seminorm(GridFunction::sample(coarse, tent), bundle);
  const double sb = seminorm(GridFunction::sample(fine, tent), bundle);
  CHECK(std::fabs(sa - sb) / sb <= 0.02);
}

TEST_CASE("gagliardo modular self-converges under doubling") {
  const auto bundle = fixture::default_bundle();
  auto f = [](double x) { return std::cos(M_PI * x / 2.0); };
  double prev = 0.0;
  std::vector<double> changes;
  for (std::size_t m : {101, 201, 401, 801}) {
    const double v = gagliardo_modular(GridFunction::sample(Grid1D(-1.0, 1.0, m), f), bundle).total;
    if (prev > 0.0) changes.push_back(std::fabs(v - prev) / v);
    prev = v;
  }
  CHECK(changes[1] <= 0.05);
  CHECK(changes[2] <= 0.02);
  CHECK(changes[2] <= changes[1]);
}

TEST_CASE("fractional p-Laplacian") {
  const std::size_t m = 41;
  const Grid1D g(-1.0, 1.0, m);
  const auto b2 = fixture::constant_bundle(2.0, 0.3, 0.5, 2.0, -1.0, 1.0);
  const auto odd = GridFunction::sample(g, [](double x) { return x * x * x - 0.5 * x; });
  CHECK(std::fabs(flap_apply(odd, b2)[m / 2]) <= 1e-13);

  std::mt19937_64 rng(43);
  const auto x = oracle::nodes(-1.0, 1.0, m);
  const GridFunction u(g, oracle::random_smooth(x, rng));
  const GridFunction v(g, oracle::random_smooth(x, rng));
  std::vector<double> sum(m);
  for (std::size_t i = 0; i < m; ++i) sum[i] = u[i] + v[i];
  const auto lu = flap_apply(u, b2), lv = flap_apply(v, b2), ls = flap_apply(GridFunction(g, sum), b2);
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(ls[i] == doctest::Approx(lu[i] + lv[i]).epsilon(1e-12).scale(std::fabs(lu[i]) + 1.0));
  }

  // <Lu, u>_w is nonnegative, and for p = 2 it is half the Gagliardo double sum.
  const auto bundle = fixture::default_bundle();
  double pairing = 0.0;
  const auto lu_var = flap_apply(u, bundle);
  for (std::size_t i = 0; i < m; ++i) pairing += g.weight(i) * lu_var[i] * u[i];
  CHECK(pairing >= 0.0);
  double pairing2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) pairing2 += g.weight(i) * lu[i] * u[i];
  CHECK(pairing2 == doctest::Approx(0.5 * gagliardo_modular(u, b2).gagliardo_term).epsilon(1e-13));
}
