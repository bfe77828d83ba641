#include "conelap/scenarios.hpp"

#include "conelap/errors.hpp"

namespace conelap {

namespace {

Scenario figure(std::string name, RawForm raw, CaseId captioned, std::string notes) {
  Scenario sc;
  sc.name = std::move(name);
  sc.source = ScenarioSource::Figure;
  sc.params = raw;
  sc.notes = std::move(notes);
  sc.captioned_case = captioned;
  return sc;
}

std::vector<Scenario> build_figures() {
  // All figures use n = 7 (alpha* = 9/5). Coefficients are the labelled ones unless
  // the notes say otherwise.
  return {
      figure("fig7_1", {-50.0, -15.0, -10.0, 1.2, 7}, CaseId::C1,
             "a_bar < 0, Q < 0; matches n = 7, Lambda = 0, alpha = 1.2 exactly"),
      figure("fig7_2", {-50.0, -15.0, 10.0, 1.2, 7}, CaseId::C2,
             "a_bar < 0, Q > 0; matches n = 7, Lambda = 0, alpha = 1.2 exactly"),
      figure("fig7_3", {5.5, -5.0 / 3.0, 5.0, 1.6, 7}, CaseId::C3,
             "w2 stable focus; derived a_bar for n = 7, Lambda = 0, alpha = 1.6 is 50/9 = 5.5556 "
             "(labelled 5.5); s = 3/4 for this alpha"),
      figure("fig7_3p", {200.0 / 81.0, -35.0 / 9.0, 5.0, 1.45, 7}, CaseId::C3prime,
             "w2 stable node; labelled coefficients (5.5, -2.15, Q = 5, alpha = 1.56) give a negative "
             "w2 discriminant, so values derived from n = 7, Lambda = 0, alpha = 1.45 are stored"),
      figure("fig7_4", {5.5, -5.0 / 3.0, -5.0, 1.6, 7}, CaseId::C4,
             "a_bar > 0, Q < 0; derived a_bar is 50/9 = 5.5556 (labelled 5.5), s = 3/4"),
      figure("fig7_5p", {5.5, -5.0 / 3.0, 0.0, 1.6, 7}, CaseId::C5plus,
             "linear saddle; derived a_bar is 50/9 = 5.5556 (labelled 5.5)"),
      figure("fig7_5m", {-50.0, -15.0, 0.0, 1.2, 7}, CaseId::C5minus, "linear stable node"),
      figure("fig7_6p", {0.0, -5.0, 5.0, 1.4, 7}, CaseId::C6plus,
             "weak stable node; b_bar = -5 matches alpha = 1.4, s = 1/2"),
      figure("fig7_6m", {0.0, -5.0, -5.0, 1.4, 7}, CaseId::C6minus, "weak saddle, s = 1/2"),
      figure("fig7_7p", {6.25, 0.0, 5.0, 1.8, 7}, CaseId::C7plus,
             "critical exponent; labelled system (-5y - 5x^1.6) is not critical, so b_bar = 0 and "
             "a_bar = 25/4 from n = 7, Lambda = 0 are stored"),
      figure("fig7_7m", {1.0, 0.0, -1.0, 1.8, 7}, CaseId::C7minus, "critical exponent, Q < 0"),
  };
}

}  // namespace

std::string_view to_string(ScenarioSource s) noexcept {
  return s == ScenarioSource::Figure ? "Figure" : "UserConfig";
}

DynParams scenario_dyn_params(const Scenario& sc) {
  if (const auto* c = std::get_if<ConeForm>(&sc.params)) return dyn_params(c->cone, c->alpha, c->Q);
  const auto& r = std::get<RawForm>(sc.params);
  return raw_dyn_params(r.a_bar, r.b_bar, r.Q, r.alpha, r.n);
}

std::optional<ConeParams> scenario_cone(const Scenario& sc) {
  if (const auto* c = std::get_if<ConeForm>(&sc.params)) return c->cone;
  return std::nullopt;
}

const std::vector<Scenario>& figure_scenarios() {
  static const std::vector<Scenario> figures = build_figures();
  return figures;
}

const Scenario& find_scenario(std::string_view name) {
  for (const auto& sc : figure_scenarios()) {
    if (sc.name == name) return sc;
  }
  throw InvalidInput("unknown scenario '" + std::string(name) + "' (see the scenarios subcommand)");
}

}  // namespace conelap
