#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vexp/errors.hpp"
#include "vexp/exponents.hpp"
#include "vexp/experiments.hpp"

using namespace vexp;

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(2.0, 0.4, 1) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(critical_exponent(2.0, 1e-12, 1) == doctest::Approx(2.0).epsilon(1e-10));
  // 1.5 / (1 - 0.75), exact in binary.
  CHECK(critical_exponent(1.5, 0.5, 1) == 6.0);
  CHECK_THROWS_AS(critical_exponent(2.0, 0.5, 1), InvalidExponent);
  CHECK_THROWS_AS(critical_exponent(3.0, 0.5, 1), InvalidExponent);
}

TEST_CASE("critical exponent is increasing in s") {
  double prev = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double v = critical_exponent(1.8, 0.005 * k, 1);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("sigma alpha") {
  CHECK(sigma_alpha(0.5, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(sigma_alpha(1e-14, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigma_alpha(0.9, 1) == doctest::Approx(2.0 / 1.1).epsilon(1e-15));
  CHECK_THROWS_AS(sigma_alpha(1.0, 1), InvalidExponent);
  CHECK_THROWS_AS(sigma_alpha(0.0, 1), InvalidExponent);
}

TEST_CASE("HLS identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<std::pair<double, double>> pairs(100);
  for (auto& pr : pairs) pr = {u01(rng), u01(rng)};

  const auto constant = ScalarExponentField::constant(0.5, 0.0, 1.0);
  CHECK(check_hls_identity(constant, 1, pairs) <= 1e-15);
  const auto affine = ScalarExponentField::affine(0.3, 0.2, 0.0, 1.0);
  CHECK(check_hls_identity(affine, 1, pairs) <= 1e-12);

  // Shifting sigma by 0.1 moves 1/sigma by about 0.1/sigma^2 at each end.
  const double corrupted = check_hls_identity(
      affine, 1, pairs, [&](double x) { return sigma_alpha(affine(x), 1) + 0.1; });
  CHECK(corrupted >= 0.01);
}

TEST_CASE("symmetric fields evaluate symmetrically") {
  const auto bundle = fixture::default_bundle();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), y = u(rng);
    CHECK(bundle.p(x, y) == bundle.p(y, x));
    CHECK(bundle.s(x, y) == bundle.s(y, x));
  }
  SymmetricExponentField skew("skew", [](double x, double y) { return 2.0 + 0.1 * x - 0.05 * y; },
                              0.0, 1.0, 1.9, 2.2);
  CHECK(skew(0.3, 0.7) == skew(0.7, 0.3));
}

TEST_CASE("r range") {
  const auto base = fixture::default_bundle();
  const Grid1D grid(-1.0, 1.0, 201);

  auto with_r = [&](ScalarExponentField r) {
    auto b = base;
    b.r = std::move(r);
    return b;
  };
  CHECK(validate_r_range(with_r(hls_upper_field(base)), grid).ok);
  CHECK(validate_r_range(with_r(hls_lower_field(base)), grid).ok);
  CHECK(validate_r_range(base, grid).ok);
  const auto too_big = validate_r_range(with_r(critical_exponent_field(base)), grid);
  CHECK_FALSE(too_big.ok);
  CHECK(too_big.worst_violation > 0.0);

  // The midpoint is the average of the two edges.
  const auto lo = hls_lower_field(base);
  const auto hi = hls_upper_field(base);
  for (double x : {-0.9, -0.2, 0.0, 0.55}) {
    CHECK(base.r(x) == doctest::Approx(0.5 * (lo(x) + hi(x))).epsilon(1e-14));
  }
}

TEST_CASE("log-Hoelder constant") {
  const Grid1D grid(0.0, 1.0, 201);
  CHECK(log_holder_constant(ScalarExponentField::constant(2.0, 0.0, 1.0), grid) == 0.0);

  // f(x) = x: sup over distances t < 1/2 of t log(1/t) is 1/e, attained at t = 1/e.
  const double c = log_holder_constant(ScalarExponentField::affine(0.0, 1.0, 0.0, 1.0), grid);
  CHECK(c > 0.0);
  CHECK(c <= 1.0 / std::exp(1.0) + 1e-12);
  CHECK(c == doctest::Approx(1.0 / std::exp(1.0)).epsilon(1e-3));

  // c / log(1/|x - x0|) near x0 = 0.5: the estimate approaches c under refinement.
  const double cc = 0.3;
  ScalarExponentField f(
      "log_touch",
      [=](double x) {
        const double d = std::fabs(x - 0.5);
        return d == 0.0 ? 0.0 : cc / std::log(1.0 / d);
      },
      0.0, 1.0, 0.0, cc / std::log(2.0));
  double prev_err = 1e300;
  for (std::size_t m : {101, 401, 1601}) {
    const double est = log_holder_constant(f, Grid1D(0.0, 1.0, m));
    CHECK(est >= cc * 0.5);
    CHECK(est <= cc * 1.5);
    const double err = std::fabs(est - cc);
    CHECK(err <= prev_err + 1e-12);
    prev_err = err;
  }
}

TEST_CASE("touching rate") {
  const auto bundle = fixture::default_bundle();
  const auto upper = hls_upper_field(bundle);
  const auto rho = log_spaced(1e-12, 0.45, 200);

  // Built with rate beta = 0.5 and constant 1: holds for beta' = 0.5 and C0 <= 1.
  const auto r = q_field_builder(upper, 0.0, 1.0, 0.5, 4.5);
  CHECK(check_touching_rate(r, upper, 0.0, 0.5, 1.0, 0.5, rho).holds);
  CHECK(check_touching_rate(r, upper, 0.0, 0.5, 0.5, 0.5, rho).holds);

  // Equal to the bound: fails for every positive C0.
  for (double C0 : {1e-6, 0.1, 1.0}) {
    CHECK_FALSE(check_touching_rate(upper, upper, 0.0, 0.5, C0, 0.5, rho).holds);
  }

  // delta away from the bound: holds once C0 / (-log rho)^beta <= delta on (0, eta).
  const double delta = 0.2;
  ScalarExponentField below(
      "below", [&](double x) { return upper(x) - delta; }, -1.0, 1.0,
      upper.declared_inf() - delta, upper.declared_sup() - delta);
  const double c_max = delta * std::sqrt(-std::log(0.45));
  CHECK(check_touching_rate(below, upper, 0.0, 0.5, 0.5 * c_max, 0.5, rho).holds);
  CHECK_FALSE(check_touching_rate(below, upper, 0.0, 0.5, 2.0 * c_max, 0.5, rho).holds);

  CHECK_THROWS_AS(check_touching_rate(r, upper, 0.0, 0.0, 1.0, 0.5, rho), InvalidArgument);
  CHECK_THROWS_AS(check_touching_rate(r, upper, 0.0, 0.5, 1.0, 1.5, rho), InvalidArgument);
}

TEST_CASE("bundle validation") {
  const Grid1D grid(-1.0, 1.0, 101);
  for (const auto& c : validate_bundle(fixture::default_bundle(), grid)) {
    if (c.required) CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
  }
  // p s >= N makes the critical exponent blow up.
  const auto bad = fixture::constant_bundle(2.6, 0.4, 0.5, 2.0, -1.0, 1.0);
  bool p_range_failed = false;
  for (const auto& c : validate_bundle(bad, grid)) {
    if (c.name == "p_range") p_range_failed = !c.pass;
  }
  CHECK(p_range_failed);
}

TEST_CASE("log spaced radii") {
  const auto r = log_spaced(1e-6, 1e-1, 6);
  REQUIRE(r.size() == 6);
  CHECK(r.front() == doctest::Approx(1e-6));
  CHECK(r.back() == doctest::Approx(1e-1));
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] / r[i - 1] == doctest::Approx(10.0));
}
