#include <cmath>
#include <sstream>

#include "doctest.h"
#include "vexp/errors.hpp"
#include "vexp_cli/config.hpp"

using namespace vexp;
using namespace vexp::cli;

namespace {

InstanceConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("default instance") {
  const auto c = parse("");
  const auto b = build_bundle(c);
  CHECK(c.a == -1.0);
  CHECK(c.b == 1.0);
  CHECK(b.p(0.3, -0.2) == doctest::Approx(2.0 + 0.2 * std::cos(M_PI * 0.1 / 4.0)).epsilon(1e-15));
  CHECK(b.s(0.3, -0.2) == doctest::Approx(0.4 - 0.05 * 0.5).epsilon(1e-15));
  CHECK(b.alpha(0.7) == 0.5);
  const auto g = build_grid(c);
  CHECK(validate_r_range(b, g).ok);
  double r_lo = 1e300;
  for (std::size_t i = 0; i < g.size(); ++i) r_lo = std::min(r_lo, b.r(g.node(i)));
  CHECK(2.0 * r_lo > b.p.declared_sup());
}

TEST_CASE("keys and values") {
  const auto c = parse(R"(
    # comment
    domain.a = 0
    domain.b = 2 * 0.5   # trailing comment
    grid.M = 51
    seed = 42
    p.kind = affine
    p.c0 = 2
    p.c1 = 0.1
    s.kind = constant
    s.value = 0.3
    q.kind = expr
    q.expr = 2 + x
    solver.rho = 0.05
    embed.scales = 1, 2, 4
  )");
  CHECK(c.b == 1.0);
  CHECK(c.M == 51);
  CHECK(c.seed == 42);
  CHECK(c.solver.rho == 0.05);
  CHECK(c.embed.scales == std::vector<int>{1, 2, 4});
  const auto b = build_bundle(c);
  CHECK(b.p(0.2, 0.4) == doctest::Approx(2.0 + 0.1 * 0.3));
  const auto q = build_q(c, b, "");
  CHECK(q(0.5) == doctest::Approx(2.5));
}

TEST_CASE("partial overrides keep the default kind") {
  const auto c = parse("p.amplitude = 0.1\n");
  CHECK(c.p.kind == "cosine_sum");
  CHECK(build_bundle(c).p(0.0, 0.0) == doctest::Approx(2.1));
}

TEST_CASE("named q fields") {
  const auto c = parse(R"(
    p.kind = constant
    p.value = 2
    s.kind = constant
    s.value = 0.4
    q.a.kind = radial_log_touch
    q.a.target = p_s_star
    q.a.x0 = 0
    q.a.C0 = 1
    q.a.beta = 1
    q.a.floor = 2
    q.b.kind = constant
    q.b.value = 3
    embed.fields = a, b
  )");
  const auto b = build_bundle(c);
  CHECK(build_q(c, b, "a")(0.0) == doctest::Approx(10.0));
  CHECK(build_q(c, b, "b")(0.3) == 3.0);
  CHECK_THROWS_AS(build_q(c, b, "c"), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("nonsense = 1"), ConfigError);
  CHECK_THROWS_AS(parse("grid.M = 5\ngrid.M = 6"), ConfigError);
  CHECK_THROWS_AS(parse("grid.M = five"), ConfigError);
  CHECK_THROWS_AS(parse("domain.a = 1 +"), ConfigError);
  CHECK_THROWS_AS(parse("domain.a = x"), ConfigError);
  CHECK_THROWS_AS(parse("no equals sign"), ConfigError);
  CHECK_THROWS_AS(parse("domain.a = 3"), ConfigError);
  CHECK_THROWS_AS(parse("embed.fields = missing"), ConfigError);
  CHECK_THROWS_AS(parse("q.x.value = 2"), ConfigError);
  CHECK_THROWS_AS(build_bundle(parse("p.kind = fancy")), ConfigError);
  CHECK_THROWS_AS(build_bundle(parse("alpha.kind = band_fraction\nalpha.theta = 0.5")), ConfigError);
  CHECK_THROWS_AS(build_bundle(parse("r.kind = radial_log_touch\nr.target = nowhere\nr.x0 = 0\nr.C0 = 1\nr.beta = 1\nr.floor = 2")),
                  ConfigError);
  CHECK_THROWS_AS(build_solver_config(parse("solver.path_points = 2")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
