#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = VEXP_BIN;
const fs::path kSource = VEXP_SOURCE_DIR;
const fs::path kWork = VEXP_WORK_DIR;

struct Run {
  int code = -1;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const auto d = kWork / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const auto err_file = dir / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + kBin + "\" " + args + " > \"" +
                          (dir / "stdout.txt").string() + "\" 2> \"" + err_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing " << p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string constant_csv(double a, double b, int m, double value) {
  std::ostringstream os;
  os << "x,value\n" << std::setprecision(17);
  for (int i = 0; i < m; ++i) {
    const double x = i + 1 == m ? b : a + (b - a) * i / (m - 1);
    os << x << ',' << value << '\n';
  }
  return os.str();
}

std::string cfg(const std::string& name) { return "\"" + (kSource / "configs" / name).string() + "\""; }

}  // namespace

TEST_CASE("norm of constants") {
  const auto d = fresh_dir("norm_const");
  write(d / "unit.cfg", "domain.a = 0\ndomain.b = 1\ngrid.M = 21\n");
  write(d / "one.csv", constant_csv(0.0, 1.0, 21, 1.0));
  write(d / "zero.csv", constant_csv(0.0, 1.0, 21, 0.0));

  auto r = run("--config \"" + (d / "unit.cfg").string() + "\" --out \"" + (d / "one").string() +
                   "\" norm --input \"" + (d / "one.csv").string() + "\"",
               d);
  REQUIRE(r.code == 0);
  auto j = load(d / "one" / "norm.json");
  CHECK(j["lebesgue"]["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j["lebesgue"]["modular"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j["sobolev"]["seminorm"].get<double>() == 0.0);

  r = run("--config \"" + (d / "unit.cfg").string() + "\" --out \"" + (d / "zero").string() +
              "\" norm --input \"" + (d / "zero.csv").string() + "\"",
          d);
  REQUIRE(r.code == 0);
  j = load(d / "zero" / "norm.json");
  for (const auto& group : {"lebesgue", "sobolev"}) {
    for (auto& [k, v] : j[group].items()) {
      if (v.is_number()) CHECK_MESSAGE(v.get<double>() == 0.0, group << "." << k);
    }
  }
}

TEST_CASE("norm golden record") {
  const auto d = fresh_dir("norm_golden");
  const auto golden = kSource / "tests" / "golden";
  const auto r = run("--out \"" + d.string() + "\" norm --input \"" +
                         (golden / "u_default.csv").string() + "\"",
                     d);
  REQUIRE(r.code == 0);
  const auto got = load(d / "norm.json");
  const auto want = load(golden / "norm_default.json");
  for (const auto& group : {"lebesgue", "sobolev"}) {
    for (auto& [k, v] : want[group].items()) {
      if (v.is_number()) {
        CHECK_MESSAGE(got[group][k].get<double>() == doctest::Approx(v.get<double>()).epsilon(1e-12),
                      group << "." << k);
      }
    }
  }
}

TEST_CASE("norm input errors") {
  const auto d = fresh_dir("norm_err");
  write(d / "short.csv", constant_csv(-1.0, 1.0, 5, 1.0));
  CHECK(run("--out \"" + d.string() + "\" norm --input \"" + (d / "short.csv").string() + "\"", d)
            .code == 2);
  CHECK(run("--out \"" + d.string() + "\" norm", d).code == 2);
}

TEST_CASE("solve is reproducible and reports convergence") {
  const auto d = fresh_dir("solve");
  write(d / "small.cfg", "grid.M = 101\n");
  const std::string conf = "--config \"" + (d / "small.cfg").string() + "\"";
  REQUIRE(run(conf + " --out \"" + (d / "a").string() + "\" solve --snapshot-every 10", d).code == 0);
  REQUIRE(run(conf + " --out \"" + (d / "b").string() + "\" solve --snapshot-every 10", d).code == 0);
  CHECK(slurp(d / "a" / "solve.json") == slurp(d / "b" / "solve.json"));
  CHECK(slurp(d / "a" / "u_star.csv") == slurp(d / "b" / "u_star.csv"));
  CHECK(fs::exists(d / "a" / "snapshot_00000.csv"));
  CHECK(fs::exists(d / "a" / "snapshot_00010.csv"));

  const auto j = load(d / "a" / "solve.json");
  CHECK(j["converged"].get<bool>());
  CHECK(j["residual"].get<double>() <= 1e-6);
  CHECK(j["critical_value"].get<double>() > 0.0);
  CHECK(j["energy"]["total"].get<double>() == j["critical_value"].get<double>());
}

TEST_CASE("solve exit codes") {
  const auto d = fresh_dir("solve_codes");
  const auto mis = run("--config " + cfg("misconfigured_r.cfg") + " --out \"" + d.string() + "\" solve", d);
  CHECK(mis.code == 2);
  CHECK(mis.err.find("find_valley_point") != std::string::npos);

  write(d / "short.cfg", "grid.M = 61\nsolver.max_outer_iters = 1\n");
  CHECK(run("--config \"" + (d / "short.cfg").string() + "\" --out \"" + d.string() + "\" solve", d)
            .code == 3);

  write(d / "broken.cfg", "grid.M = many\n");
  const auto broken = run("--config \"" + (d / "broken.cfg").string() + "\" solve", d);
  CHECK(broken.code == 2);
  CHECK(broken.err.find("grid.M") != std::string::npos);
}

TEST_CASE("embed reproduces the dichotomy tables") {
  const auto d = fresh_dir("embed");
  REQUIRE(run("--config " + cfg("dichotomy.cfg") + " --out \"" + d.string() + "\" embed", d).code == 0);
  const auto golden = kSource / "tests" / "golden";
  for (const auto& name : {"half", "one", "sub"}) {
    const std::string file = std::string("verdict_") + name + ".csv";
    CHECK_MESSAGE(slurp(d / file) == slurp(golden / file), file);
  }
  const auto j = load(d / "embed.json");
  CHECK(j["fields"]["half"]["verdict"]["verdict"] == "mass escapes");
  CHECK(j["fields"]["one"]["verdict"]["verdict"] == "concentration persists");
  CHECK(j["fields"]["sub"]["verdict"]["verdict"] == "mass escapes");
}

TEST_CASE("validate") {
  const auto d = fresh_dir("validate");
  CHECK(run("--out \"" + d.string() + "\" validate", d).code == 0);
  CHECK(run("--config " + cfg("tr_critical.cfg") + " --out \"" + d.string() + "\" validate", d).code == 0);

  auto failed = [&](const std::string& check) {
    const auto report = load(d / "validate.json");
    for (const auto& c : report["checks"]) {
      if (c["name"] == check) return !c["pass"].get<bool>();
    }
    return false;
  };

  write(d / "r_star.cfg", "r.kind = radial_log_touch\nr.target = p_s_star\nr.x0 = 0\nr.C0 = 1e-300\nr.beta = 1\nr.floor = 2\n");
  CHECK(run("--config \"" + (d / "r_star.cfg").string() + "\" --out \"" + d.string() + "\" validate", d)
            .code == 2);
  CHECK(failed("r_range"));

  write(d / "sigma.cfg", "validate.sigma_shift = 0.1\n");
  CHECK(run("--config \"" + (d / "sigma.cfg").string() + "\" --out \"" + d.string() + "\" validate", d)
            .code == 2);
  CHECK(failed("hls_identity"));
}

TEST_CASE("output directory from the environment") {
  const auto d = fresh_dir("env_out");
  CHECK(run("validate", d, "VEXP_OUT_DIR=\"" + (d / "from_env").string() + "\"").code == 0);
  CHECK(fs::exists(d / "from_env" / "validate.json"));
  CHECK(run("--out \"" + (d / "flag").string() + "\" validate", d,
            "VEXP_OUT_DIR=\"" + (d / "from_env2").string() + "\"")
            .code == 0);
  CHECK(fs::exists(d / "flag" / "validate.json"));
  CHECK_FALSE(fs::exists(d / "from_env2"));
}
