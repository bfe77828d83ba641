#pragma once

// Named parameter sets: the stored phase-portrait figures plus user configs.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conelap/cone_geometry.hpp"
#include "conelap/nonlinear_dynamics.hpp"

namespace conelap {

enum class ScenarioSource { Figure, UserConfig };

std::string_view to_string(ScenarioSource s) noexcept;

struct ConeForm {
  ConeParams cone;
  double alpha = 0.0;
  double Q = 0.0;
};

struct RawForm {
  double a_bar = 0.0;
  double b_bar = 0.0;
  double Q = 0.0;
  double alpha = 0.0;
  int n = 0;
};

struct Scenario {
  std::string name;
  ScenarioSource source = ScenarioSource::UserConfig;
  std::variant<ConeForm, RawForm> params;
  std::string notes;
  std::optional<CaseId> captioned_case;  // figures only

  bool is_cone() const noexcept { return std::holds_alternative<ConeForm>(params); }
};

DynParams scenario_dyn_params(const Scenario& sc);
std::optional<ConeParams> scenario_cone(const Scenario& sc);

// Eleven read-only figure scenarios, fig7_1 .. fig7_7m.
const std::vector<Scenario>& figure_scenarios();

// Throws InvalidInput for an unknown name.
const Scenario& find_scenario(std::string_view name);

// Flat key=value file with '#' comments. Keys: p, q, rp, rq, alpha, Q (cone form)
// or a_bar, b_bar, Q, alpha, n (raw form), plus an optional name.
Scenario load_config(const std::string& path);
Scenario parse_config(std::string_view text, std::string_view origin = "<config>");

}  // namespace conelap
