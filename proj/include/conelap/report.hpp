#pragma once

// JSON reports. A report starts with an "inputs" echo from which the whole
// report can be regenerated.

#include <string>

#include "json.hpp"

#include "conelap/cone_geometry.hpp"
#include "conelap/nonlinear_dynamics.hpp"
#include "conelap/scenarios.hpp"

namespace conelap {

using nlohmann::json;

struct ReportOptions {
  int i_max = 2;
  int j_max = 2;
};

json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const json& j);  // InvalidInput on malformed input

json geometry_json(const ConeParams& cone);
json spectral_json(const ConeParams& cone, int i_max, int j_max);
json dynamics_json(const DynParams& dp, const std::optional<ConeParams>& cone);

// inputs, geometry and spectral table (cone form only), dynamics, case, families.
json build_report(const Scenario& sc, const ReportOptions& opts = {});

// Reads a report written by build_report and returns its echoed inputs.
std::pair<Scenario, ReportOptions> inputs_from_report(const json& report);
std::pair<Scenario, ReportOptions> inputs_from_report_file(const std::string& path);

// Canonical serialization: two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace conelap
