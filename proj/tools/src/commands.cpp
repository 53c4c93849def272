#include "vexp_cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "vexp/choquard.hpp"
#include "vexp/errors.hpp"
#include "vexp/experiments.hpp"
#include "vexp/nakano.hpp"
#include "vexp/sobolev.hpp"
#include "vexp/solver.hpp"
#include "vexp_cli/report_json.hpp"

namespace vexp::cli {

namespace fs = std::filesystem;

namespace {

std::string path_in(const RunOptions& options, const std::string& name) {
  return (fs::path(options.out_dir) / name).string();
}

void ensure_dir(const RunOptions& options) {
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + options.out_dir + "'");
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Rows of `n,eps,modular,bound,verdict`.
class CsvTable {
 public:
  void add(const std::string& n, double eps, double modular, double bound,
           const std::string& verdict) {
    body_ << n << ',' << num(eps) << ',' << num(modular) << ',' << num(bound) << ',' << verdict
          << '\n';
  }
  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "n,eps,modular,bound,verdict\n" << body_.str();
  }

 private:
  std::ostringstream body_;
};

std::string suffix(const std::string& name) { return name.empty() ? "" : "_" + name; }

}  // namespace

std::string resolve_out_dir(const std::optional<std::string>& flag, const InstanceConfig& config) {
  if (flag) return *flag;
  if (const char* env = std::getenv("VEXP_OUT_DIR"); env && *env) return env;
  if (!config.output_dir.empty()) return config.output_dir;
  return ".";
}

int cmd_norm(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
             std::ostream& err) {
  if (!options.input) {
    err << "norm: --input <csv> is required\n";
    return kConfigError;
  }
  const auto grid = build_grid(config);
  const auto bundle = build_bundle(config);
  std::ifstream in(*options.input);
  if (!in) {
    err << "norm: cannot open '" << *options.input << "'\n";
    return kConfigError;
  }
  const auto u = [&] {
    try {
      return GridFunction::read_csv(in, grid);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("norm: ") + e.what());
    }
  }();

  const bool has_q = config.q.count("") > 0;
  const ScalarExponentField exponent = has_q ? build_q(config, bundle, "") : bundle.p.diagonal();
  const PairTable table(grid, bundle);
  const auto modular = gagliardo_modular(u, table);
  json j = {
      {"command", "norm"},
      {"grid", to_json(grid)},
      {"lebesgue",
       {{"exponent", has_q ? "q" : "p(x,x)"},
        {"norm", luxemburg_norm(u, exponent)},
        {"modular", modular_lp(u, exponent).value}}},
      {"sobolev",
       {{"norm", sobolev_norm(u, table)},
        {"seminorm", seminorm(u, table)},
        {"gagliardo_modular", modular.gagliardo_term},
        {"lp_modular", modular.lp_term},
        {"total_modular", modular.total}}},
  };
  ensure_dir(options);
  write_json(path_in(options, "norm.json"), j);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_solve(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
              std::ostream& err) {
  const auto grid = build_grid(config);
  const auto bundle = build_bundle(config);
  auto mp = build_solver_config(config);
  const ChoquardEnergy energy(grid, bundle);

  try {
    find_valley_point(energy, default_direction(grid));
  } catch (const ValleyNotFound& e) {
    err << "solve: " << e.what() << '\n';
    return kConfigError;
  }
  const auto ring = verify_mp_geometry(energy, mp.rho, mp.ring_samples, mp.seed);
  if (!ring.pass) {
    err << "solve: mountain-pass ring check failed at rho = " << mp.rho
        << " (d_hat = " << ring.d_hat << ")\n";
    return kConfigError;
  }
  mp.ring = ring;

  ensure_dir(options);
  if (options.snapshot_every > 0) {
    mp.snapshot_every = options.snapshot_every;
    mp.snapshot = [&](std::size_t it, const GridFunction& w) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(5) << std::setfill('0') << it << ".csv";
      std::ofstream f(path_in(options, name.str()));
      w.write_csv(f);
    };
  }
  const auto report = mountain_pass_solve(energy, mp);
  json j = to_json(report);
  j["command"] = "solve";
  j["grid"] = to_json(grid);
  j["seed"] = config.seed;
  j["energy"] = to_json(energy.report(report.u_star.values()));
  write_json(path_in(options, "solve.json"), j);
  {
    std::ofstream f(path_in(options, "u_star.csv"));
    report.u_star.write_csv(f);
  }
  out << j.dump(2) << '\n';
  if (!report.converged) {
    err << "solve: no convergence after " << report.iters << " iterations (residual "
        << report.residual << ")\n";
    return kNonConvergence;
  }
  return kOk;
}

int cmd_embed(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
              std::ostream& err) {
  const auto grid = build_grid(config);
  const auto bundle = build_bundle(config);
  std::vector<std::string> names = config.embed.fields;
  if (names.empty()) {
    if (!config.q.count("")) {
      err << "embed: configure q.* or embed.fields\n";
      return kConfigError;
    }
    names.push_back("");
  }
  const auto& e = config.embed;
  ConcentrationFamily family(e.x0, e.scales, grid);
  const double bound = noncompact_bound(bundle.dimension, bundle.p.declared_inf(),
                                        bundle.s.declared_inf(), e.C0);

  // Probe members: the family, one phi_n adapted to each eps, random bumps.
  std::vector<SupportedFunction> members;
  std::vector<int> member_scale;
  auto add_phi = [&](int n) {
    for (int m : member_scale) {
      if (m == n) return;
    }
    try {
      members.push_back(concentration_member(family, n, bundle));
      member_scale.push_back(n);
    } catch (const InvalidArgument&) {
      // Support leaves the domain.
    }
  };
  for (int n : e.scales) add_phi(n);
  for (double eps : e.eps) add_phi(static_cast<int>(std::ceil(1.0 / eps)));
  for (auto& b : random_bump_members(e.x0, 0.5, bundle.a(), bundle.b(), e.random_members,
                                     config.seed)) {
    members.push_back(std::move(b));
    member_scale.push_back(0);
  }

  ensure_dir(options);
  json summary = {{"command", "embed"}, {"grid", to_json(grid)}, {"bound", bound}};
  json fields = json::object();
  for (const auto& name : names) {
    const auto q = build_q(config, bundle, name);
    json fj;

    const auto verdict = compactness_verdict(bundle, q, family, e.C0);
    CsvTable vt;
    for (const auto& row : verdict.rows) {
      vt.add(std::to_string(row.n), 1.0 / row.n, row.modular, row.bound, verdict.verdict);
    }
    vt.write(path_in(options, "verdict" + suffix(name) + ".csv"));
    fj["verdict"] = to_json(verdict);

    const auto tail = tail_vanishing_probe(bundle, q, e.x0, e.rho_bound, e.eps, members);
    CsvTable tt;
    for (const auto& row : tail.rows) {
      std::string n = "0";
      for (std::size_t k = 0; k < members.size(); ++k) {
        if (members[k].label == row.argmax) n = std::to_string(member_scale[k]);
      }
      tt.add(n, row.eps, row.value, bound, row.argmax.empty() ? "none" : row.argmax);
    }
    tt.write(path_in(options, "tail" + suffix(name) + ".csv"));
    fj["tail"] = to_json(tail);

    try {
      const auto annulus =
          annulus_rate_check(bundle, q, e.x0, e.annulus_eps, e.annulus_n_max, e.annulus_beta, grid);
      CsvTable at;
      for (const auto& row : annulus.rows) {
        const double rel = row.ratio / annulus.fitted_C;
        at.add(std::to_string(row.n), e.annulus_eps, row.gap, row.bound,
               rel >= 0.1 && rel <= 10.0 ? "within" : "outside");
      }
      at.write(path_in(options, "annulus" + suffix(name) + ".csv"));
      fj["annulus"] = to_json(annulus);
    } catch (const RefineGrid& ex) {
      fj["annulus"] = {{"error", ex.what()}};
      err << "embed: " << ex.what() << '\n';
    }
    fields[name.empty() ? "q" : name] = fj;
  }
  summary["fields"] = fields;
  write_json(path_in(options, "embed.json"), summary);
  out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_validate(const InstanceConfig& config, const RunOptions& options, std::ostream& out,
                 std::ostream&) {
  const auto grid = build_grid(config);
  const auto bundle = build_bundle(config);
  auto checks = validate_bundle(bundle, grid);

  const auto rr = validate_r_range(bundle, grid);
  checks.push_back({"r_range", rr.ok,
                    rr.ok ? "r inside the admissible band at every node"
                          : "worst violation " + num(rr.worst_violation) + " at x = " +
                                num(rr.worst_x)});

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(bundle.a(), bundle.b());
  std::vector<std::pair<double, double>> pairs(1000);
  for (auto& pr : pairs) {
    pr.first = unif(rng);
    pr.second = unif(rng);
  }
  const double shift = config.sigma_shift;
  const int dim = bundle.dimension;
  const double hls = check_hls_identity(
      bundle.alpha, dim, pairs,
      [&](double x) { return sigma_alpha(bundle.alpha(x), dim) + shift; });
  checks.push_back({"hls_identity", hls <= 1e-12, "max residual " + num(hls) + " on 1000 pairs"});

  double p_hi = bundle.p.declared_sup();
  double r_lo = bundle.r.declared_inf();
  for (std::size_t i = 0; i < grid.size(); ++i) r_lo = std::min(r_lo, bundle.r(grid.node(i)));
  checks.push_back({"mp_growth", 2.0 * r_lo > p_hi,
                    "2 r^- = " + num(2.0 * r_lo) + " vs p^+ = " + num(p_hi)});

  checks.push_back({"log_holder_p", true, "C >= " + num(log_holder_constant(bundle.p, grid)), false});
  checks.push_back({"log_holder_s", true, "C >= " + num(log_holder_constant(bundle.s, grid)), false});
  checks.push_back(
      {"log_holder_alpha", true, "C >= " + num(log_holder_constant(bundle.alpha, grid)), false});
  checks.push_back({"log_holder_r", true, "C >= " + num(log_holder_constant(bundle.r, grid)), false});

  if (config.tr) {
    const auto& t = *config.tr;
    try {
      const auto rho = log_spaced(1e-12, 0.99 * t.eta, 200);
      const auto tr = check_tr_condition(bundle, t.x0, t.beta, t.C0, t.eta, rho);
      checks.push_back({"touching_rate", tr.holds,
                        "worst margin " + num(tr.worst_margin) + " at rho = " + num(tr.worst_rho)});
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("tr: ") + e.what());
    }
  }

  bool pass = true;
  json list = json::array();
  for (const auto& c : checks) {
    if (c.required) pass = pass && c.pass;
    list.push_back(to_json(c));
  }
  json j = {{"command", "validate"}, {"grid", to_json(grid)}, {"checks", list}, {"pass", pass}};
  ensure_dir(options);
  write_json(path_in(options, "validate.json"), j);
  out << j.dump(2) << '\n';
  return pass ? kOk : kConfigError;
}

}  // namespace vexp::cli
