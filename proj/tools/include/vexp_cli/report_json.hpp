#pragma once

#include <string>

#include "json.hpp"
#include "vexp/choquard.hpp"
#include "vexp/exponents.hpp"
#include "vexp/experiments.hpp"
#include "vexp/grid.hpp"
#include "vexp/solver.hpp"

namespace vexp::cli {

using nlohmann::json;

json to_json(const Grid1D& grid);
json to_json(const EnergyReport& report);
json to_json(const MpGeometry& ring);
json to_json(const SolveReport& report);
json to_json(const NamedCheck& check);
json to_json(const CompactnessReport& report);
json to_json(const AnnulusTable& table);
json to_json(const TailTable& table);

/// Pretty-printed with a trailing newline.
void write_json(const std::string& path, const json& value);

}  // namespace vexp::cli
