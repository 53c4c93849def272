#include "vexp_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vexp/errors.hpp"
#include "vexp/experiments.hpp"
#include "vexp/expression.hpp"

namespace vexp::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& key, const std::string& value) {
  Expression e = [&] {
    try {
      return Expression::parse(value);
    } catch (const ConfigError& err) {
      throw ConfigError(key + ": " + err.what());
    }
  }();
  // A constant expression evaluates identically at any two points.
  const double v0 = e(0.0, 0.0);
  const double v1 = e(0.37, -0.61);
  if (v0 != v1 && !(std::isnan(v0) && std::isnan(v1))) {
    throw ConfigError(key + ": expected a constant, got '" + value + "'");
  }
  if (!std::isfinite(v0)) throw ConfigError(key + ": value '" + value + "' is not finite");
  return v0;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  if (used != value.size() || value.front() == '-') {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return static_cast<std::size_t>(v);
}

const std::map<std::string, std::set<std::string>>& symmetric_kinds() {
  static const std::map<std::string, std::set<std::string>> kinds{
      {"constant", {"value"}},
      {"affine", {"c0", "c1"}},
      {"expr", {"expr"}},
      {"cosine_sum", {"base", "amplitude", "frequency", "phase"}},
      {"distance_affine", {"base", "slope", "clamp_lo", "clamp_hi"}},
  };
  return kinds;
}

const std::map<std::string, std::set<std::string>>& scalar_kinds() {
  static const std::map<std::string, std::set<std::string>> kinds{
      {"constant", {"value"}},
      {"affine", {"c0", "c1"}},
      {"expr", {"expr"}},
      {"cosine_sum", {"base", "amplitude", "frequency", "phase"}},
      {"band_fraction", {"theta"}},
      {"radial_log_touch", {"target", "x0", "C0", "beta", "floor"}},
  };
  return kinds;
}

void check_field(const std::string& role, const FieldSpec& f, bool symmetric) {
  const auto& kinds = symmetric ? symmetric_kinds() : scalar_kinds();
  const auto it = kinds.find(f.kind);
  if (it == kinds.end()) {
    throw ConfigError(role + ".kind: unknown kind '" + f.kind + "' for a " +
                      (symmetric ? "symmetric" : "scalar") + " field");
  }
  for (const auto& [k, v] : f.params) {
    if (!it->second.count(k)) {
      throw ConfigError(role + "." + k + ": not a parameter of kind '" + f.kind + "'");
    }
  }
}

double param(const std::string& role, const FieldSpec& f, const std::string& name,
             std::optional<double> fallback = std::nullopt) {
  const auto it = f.params.find(name);
  if (it == f.params.end()) {
    if (fallback) return *fallback;
    throw ConfigError(role + "." + name + ": required by kind '" + f.kind + "'");
  }
  return parse_number(role + "." + name, it->second);
}

std::string text_param(const std::string& role, const FieldSpec& f, const std::string& name) {
  const auto it = f.params.find(name);
  if (it == f.params.end()) throw ConfigError(role + "." + name + ": required by kind '" + f.kind + "'");
  return it->second;
}

SymmetricExponentField build_symmetric(const std::string& role, const FieldSpec& f, double a,
                                       double b) {
  check_field(role, f, true);
  if (f.kind == "constant") return SymmetricExponentField::constant(param(role, f, "value"), a, b);
  if (f.kind == "affine") {
    const double c0 = param(role, f, "c0");
    const double c1 = param(role, f, "c1");
    return SymmetricExponentField::sampled(
        role + ":affine", [c0, c1](double x, double y) { return c0 + c1 * 0.5 * (x + y); }, a, b);
  }
  if (f.kind == "expr") {
    const auto e = Expression::parse(text_param(role, f, "expr"));
    return SymmetricExponentField::sampled(role + ":" + e.source(),
                                           [e](double x, double y) { return e(x, y); }, a, b);
  }
  if (f.kind == "cosine_sum") {
    const double base = param(role, f, "base");
    const double amp = param(role, f, "amplitude");
    const double freq = param(role, f, "frequency");
    const double phase = param(role, f, "phase", 0.0);
    return SymmetricExponentField::sampled(
        role + ":cosine_sum",
        [=](double x, double y) { return base + amp * std::cos(freq * (x + y) + phase); }, a, b);
  }
  const double base = param(role, f, "base");
  const double slope = param(role, f, "slope");
  const double lo = param(role, f, "clamp_lo", -HUGE_VAL);
  const double hi = param(role, f, "clamp_hi", HUGE_VAL);
  if (!(lo <= hi)) throw ConfigError(role + ": clamp_lo > clamp_hi");
  return SymmetricExponentField::sampled(
      role + ":distance_affine",
      [=](double x, double y) { return std::clamp(base + slope * std::fabs(x - y), lo, hi); }, a,
      b);
}

/// Scalar kinds that do not depend on other fields.
std::optional<ScalarExponentField> build_plain_scalar(const std::string& role, const FieldSpec& f,
                                                      double a, double b) {
  if (f.kind == "constant") return ScalarExponentField::constant(param(role, f, "value"), a, b);
  if (f.kind == "affine") {
    return ScalarExponentField::affine(param(role, f, "c0"), param(role, f, "c1"), a, b);
  }
  if (f.kind == "expr") {
    const auto e = Expression::parse(text_param(role, f, "expr"));
    if (e.uses_y()) throw ConfigError(role + ".expr: a scalar field may only use x");
    return ScalarExponentField::sampled(role + ":" + e.source(), [e](double x) { return e(x); },
                                        a, b);
  }
  if (f.kind == "cosine_sum") {
    const double base = param(role, f, "base");
    const double amp = param(role, f, "amplitude");
    const double freq = param(role, f, "frequency");
    const double phase = param(role, f, "phase", 0.0);
    return ScalarExponentField::sampled(
        role + ":cosine_sum", [=](double x) { return base + amp * std::cos(freq * x + phase); }, a,
        b);
  }
  return std::nullopt;
}

ScalarExponentField build_dependent_scalar(const std::string& role, const FieldSpec& f,
                                           const ExponentBundle& partial) {
  check_field(role, f, false);
  if (auto plain = build_plain_scalar(role, f, partial.a(), partial.b())) return *plain;
  if (f.kind == "band_fraction") return band_fraction_field(partial, param(role, f, "theta"));
  const std::string target = text_param(role, f, "target");
  ScalarExponentField critical = [&] {
    if (target == "hls_upper") return hls_upper_field(partial);
    if (target == "p_s_star") return critical_exponent_field(partial);
    throw ConfigError(role + ".target: expected 'hls_upper' or 'p_s_star', got '" + target + "'");
  }();
  try {
    return q_field_builder(critical, param(role, f, "x0"), param(role, f, "C0"),
                           param(role, f, "beta"), param(role, f, "floor"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(role + ": " + e.what());
  } catch (const InvalidExponent& e) {
    throw ConfigError(role + ": " + e.what());
  }
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& item : split(value, ',')) {
    if constexpr (std::is_same_v<T, int>) {
      out.push_back(static_cast<int>(parse_count(key, item)));
    } else if constexpr (std::is_same_v<T, double>) {
      out.push_back(parse_number(key, item));
    } else {
      out.push_back(item);
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

}  // namespace

InstanceConfig default_instance() {
  InstanceConfig c;
  c.p = {"cosine_sum", {{"base", "2"}, {"amplitude", "0.2"}, {"frequency", "pi/4"}}};
  c.s = {"distance_affine",
         {{"base", "0.4"}, {"slope", "-0.05"}, {"clamp_lo", "1e-6"}, {"clamp_hi", "1 - 1e-6"}}};
  c.alpha = {"constant", {{"value", "0.5"}}};
  c.r = {"band_fraction", {{"theta", "0.5"}}};
  return c;
}

InstanceConfig parse_config(std::istream& in, const std::string& source) {
  InstanceConfig c = default_instance();
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  std::map<std::string, FieldSpec> fields;
  for (const auto& [key, value] : kv) {
    const auto parts = split(key, '.');
    if (parts.empty()) throw ConfigError("empty key");
    const std::string& head = parts[0];
    if (head == "p" || head == "s" || head == "alpha" || head == "r" || head == "q") {
      std::string role;
      std::string leaf;
      if (parts.size() == 2) {
        role = head;
        leaf = parts[1];
      } else if (parts.size() == 3 && head == "q") {
        role = "q." + parts[1];
        leaf = parts[2];
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
      auto& f = fields[role];
      if (leaf == "kind") {
        f.kind = value;
      } else {
        f.params[leaf] = value;
      }
      continue;
    }
    if (key == "domain.a") {
      c.a = parse_number(key, value);
    } else if (key == "domain.b") {
      c.b = parse_number(key, value);
    } else if (key == "grid.M") {
      c.M = parse_count(key, value);
    } else if (key == "dimension") {
      c.dimension = static_cast<int>(parse_count(key, value));
      if (c.dimension != 1) throw ConfigError("dimension: only N = 1 is discretized");
    } else if (key == "seed") {
      c.seed = parse_count(key, value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "solver.path_points") {
      c.solver.path_points = parse_count(key, value);
    } else if (key == "solver.descent_tol") {
      c.solver.descent_tol = parse_number(key, value);
    } else if (key == "solver.max_outer_iters") {
      c.solver.max_outer_iters = parse_count(key, value);
    } else if (key == "solver.max_descent_iters") {
      c.solver.max_descent_iters = parse_count(key, value);
    } else if (key == "solver.armijo_c") {
      c.solver.armijo_c = parse_number(key, value);
    } else if (key == "solver.rho") {
      c.solver.rho = parse_number(key, value);
    } else if (key == "solver.ring_samples") {
      c.solver.ring_samples = parse_count(key, value);
    } else if (key == "embed.x0") {
      c.embed.x0 = parse_number(key, value);
    } else if (key == "embed.C0") {
      c.embed.C0 = parse_number(key, value);
    } else if (key == "embed.scales") {
      c.embed.scales = parse_list<int>(key, value);
    } else if (key == "embed.eps") {
      c.embed.eps = parse_list<double>(key, value);
    } else if (key == "embed.annulus_eps") {
      c.embed.annulus_eps = parse_number(key, value);
    } else if (key == "embed.annulus_n_max") {
      c.embed.annulus_n_max = static_cast<int>(parse_count(key, value));
    } else if (key == "embed.annulus_beta") {
      c.embed.annulus_beta = parse_number(key, value);
    } else if (key == "embed.rho_bound") {
      c.embed.rho_bound = parse_number(key, value);
    } else if (key == "embed.random_members") {
      c.embed.random_members = parse_count(key, value);
    } else if (key == "embed.fields") {
      c.embed.fields = parse_list<std::string>(key, value);
    } else if (key == "tr.x0" || key == "tr.beta" || key == "tr.C0" || key == "tr.eta") {
      if (!c.tr) c.tr = TrSettings{};
      const double v = parse_number(key, value);
      if (key == "tr.x0") c.tr->x0 = v;
      if (key == "tr.beta") c.tr->beta = v;
      if (key == "tr.C0") c.tr->C0 = v;
      if (key == "tr.eta") c.tr->eta = v;
    } else if (key == "validate.sigma_shift") {
      c.sigma_shift = parse_number(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  for (auto& [role, f] : fields) {
    FieldSpec* target = nullptr;
    if (role == "p") target = &c.p;
    if (role == "s") target = &c.s;
    if (role == "alpha") target = &c.alpha;
    if (role == "r") target = &c.r;
    if (target) {
      if (!f.kind.empty()) {
        *target = f;
      } else {
        for (auto& [k, v] : f.params) target->params[k] = v;
      }
    } else {
      if (f.kind.empty()) throw ConfigError(role + ".kind: missing");
      c.q[role == "q" ? std::string() : role.substr(2)] = f;
    }
  }
  for (const auto& name : c.embed.fields) {
    if (!c.q.count(name)) throw ConfigError("embed.fields: no field 'q." + name + ".*'");
  }
  if (!(c.a < c.b)) throw ConfigError("domain: need domain.a < domain.b");
  if (c.M < 3) throw ConfigError("grid.M: need at least 3 nodes");
  return c;
}

InstanceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in, path);
}

Grid1D build_grid(const InstanceConfig& config) { return Grid1D(config.a, config.b, config.M); }

ExponentBundle build_bundle(const InstanceConfig& config) {
  try {
    auto p = build_symmetric("p", config.p, config.a, config.b);
    auto s = build_symmetric("s", config.s, config.a, config.b);
    check_field("alpha", config.alpha, false);
    if (config.alpha.kind == "band_fraction" || config.alpha.kind == "radial_log_touch") {
      throw ConfigError("alpha.kind: '" + config.alpha.kind + "' is only available for r and q");
    }
    auto alpha = *build_plain_scalar("alpha", config.alpha, config.a, config.b);
    ExponentBundle partial{p, s, alpha, alpha, config.dimension};
    auto r = build_dependent_scalar("r", config.r, partial);
    return ExponentBundle{std::move(p), std::move(s), std::move(alpha), std::move(r),
                          config.dimension};
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("exponents: ") + e.what());
  }
}

ScalarExponentField build_q(const InstanceConfig& config, const ExponentBundle& bundle,
                            const std::string& name) {
  const auto it = config.q.find(name);
  if (it == config.q.end()) {
    throw ConfigError(name.empty() ? "no q field configured" : "no field 'q." + name + "'");
  }
  try {
    return build_dependent_scalar(name.empty() ? "q" : "q." + name, it->second, bundle);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("q: ") + e.what());
  }
}

MountainPassConfig build_solver_config(const InstanceConfig& config) {
  MountainPassConfig m;
  m.path_points = config.solver.path_points;
  m.descent_tol = config.solver.descent_tol;
  m.max_outer_iters = config.solver.max_outer_iters;
  m.max_descent_iters = config.solver.max_descent_iters;
  m.armijo_c = config.solver.armijo_c;
  m.rho = config.solver.rho;
  m.ring_samples = config.solver.ring_samples;
  m.seed = config.seed;
  try {
    m.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

}  // namespace vexp::cli
