#include "vexp_cli/report_json.hpp"

#include <fstream>

#include "vexp/errors.hpp"

namespace vexp::cli {

json to_json(const Grid1D& grid) {
  return {{"a", grid.a()}, {"b", grid.b()}, {"M", grid.size()}};
}

json to_json(const EnergyReport& r) {
  return {{"gagliardo_energy", r.gagliardo_energy},
          {"lp_energy", r.lp_energy},
          {"choquard_energy", r.choquard_energy},
          {"total", r.total},
          {"gradient_sup_norm", r.gradient_sup_norm}};
}

json to_json(const MpGeometry& g) {
  return {{"rho", g.rho}, {"d_hat", g.d_hat}, {"pass", g.pass}, {"samples", g.samples}};
}

json to_json(const SolveReport& r) {
  json history = json::array();
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    const auto& h = r.history[i];
    history.push_back(
        {{"iter", i}, {"max_energy", h.max_energy}, {"residual", h.residual}, {"step", h.step}});
  }
  return {{"converged", r.converged},
          {"critical_value", r.critical_value},
          {"residual", r.residual},
          {"iters", r.iters},
          {"valley_t", r.valley_t},
          {"sobolev_norm", r.sobolev_norm},
          {"mp_ring", to_json(r.mp_ring)},
          {"history", history}};
}

json to_json(const NamedCheck& c) {
  return {{"name", c.name}, {"pass", c.pass}, {"required", c.required}, {"detail", c.detail}};
}

json to_json(const CompactnessReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"modular", row.modular}});
  return {{"verdict", r.verdict}, {"bound", r.bound}, {"rows", rows}};
}

json to_json(const AnnulusTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back(
        {{"n", row.n}, {"gap", row.gap}, {"bound", row.bound}, {"ratio", row.ratio}});
  }
  return {{"fitted_C", t.fitted_C}, {"spread", t.spread}, {"rows", rows}};
}

json to_json(const TailTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"eps", row.eps}, {"value", row.value}, {"argmax", row.argmax}});
  }
  return {{"rows", rows}, {"rejected", t.rejected}};
}

void write_json(const std::string& path, const json& value) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << value.dump(2) << '\n';
}

}  // namespace vexp::cli
