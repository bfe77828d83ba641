#include "conelap/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "conelap/errors.hpp"
#include "conelap/ode_engine.hpp"
#include "conelap/spectral_linear.hpp"

namespace conelap {

namespace {

double rel_residual(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

json verdict_json(const SobolevVerdict& v) {
  return {{"exponent_q", v.exponent_q}, {"max_order", v.max_order}, {"in_L2", v.in_L2},
          {"in_H1", v.in_H1},           {"in_H2", v.in_H2}};
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("report inputs lack '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("report input '") + key + "' has the wrong type");
  }
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["source"] = std::string(to_string(sc.source));
  if (const auto* c = std::get_if<ConeForm>(&sc.params)) {
    j["form"] = "cone";
    j["p"] = c->cone.p;
    j["q"] = c->cone.q;
    j["rp"] = c->cone.r_p;
    j["rq"] = c->cone.r_q;
    j["alpha"] = c->alpha;
    j["Q"] = c->Q;
  } else {
    const auto& r = std::get<RawForm>(sc.params);
    j["form"] = "raw";
    j["a_bar"] = r.a_bar;
    j["b_bar"] = r.b_bar;
    j["Q"] = r.Q;
    j["alpha"] = r.alpha;
    j["n"] = r.n;
  }
  j["notes"] = sc.notes;
  if (sc.captioned_case) j["captioned_case"] = std::string(to_string(*sc.captioned_case));
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("scenario echo must be a JSON object");
  Scenario sc;
  sc.name = field<std::string>(j, "name");
  const auto source = field<std::string>(j, "source");
  if (source == "Figure") {
    sc.source = ScenarioSource::Figure;
  } else if (source == "UserConfig") {
    sc.source = ScenarioSource::UserConfig;
  } else {
    throw InvalidInput("unknown scenario source '" + source + "'");
  }
  const auto form = field<std::string>(j, "form");
  if (form == "cone") {
    ConeForm c;
    c.cone = make_cone(field<int>(j, "p"), field<int>(j, "q"), field<double>(j, "rp"), field<double>(j, "rq"));
    c.alpha = field<double>(j, "alpha");
    c.Q = field<double>(j, "Q");
    sc.params = c;
  } else if (form == "raw") {
    sc.params = RawForm{field<double>(j, "a_bar"), field<double>(j, "b_bar"), field<double>(j, "Q"),
                        field<double>(j, "alpha"), field<int>(j, "n")};
  } else {
    throw InvalidInput("unknown parameter form '" + form + "'");
  }
  sc.notes = j.value("notes", std::string());
  if (j.contains("captioned_case")) {
    const auto label = field<std::string>(j, "captioned_case");
    sc.captioned_case = case_id_from_string(label);
    if (!sc.captioned_case) throw InvalidInput("unknown case label '" + label + "'");
  }
  scenario_dyn_params(sc);
  return sc;
}

json geometry_json(const ConeParams& cone) {
  const double lambda = lambda_factor(cone);
  const double lambda_rw = lambda_factor_rewritten(cone);
  const double mu_sq = mu_squared(cone);
  const double mu_sq_direct = mu_squared_direct(cone);
  const auto ext = lambda_extrema(cone.n(), cone.r_p, cone.r_q);
  return {
      {"n", cone.n()},
      {"lambda", lambda},
      {"lambda_residual", rel_residual(lambda_rw, lambda)},
      {"mu_sq", mu_sq},
      {"mu_sq_residual", rel_residual(mu_sq_direct, mu_sq)},
      {"sphere_curvature_sum", sphere_curvature_sum(cone)},
      {"plus_threshold", 2.0 * (cone.n() - 1.0) / (cone.n() - 2.0)},
      {"case", std::string(to_string(case_sign(cone)))},
      {"case_tolerance", 1e-12},
      {"below_recommended_dimension", below_recommended_dimension(cone)},
      {"lambda_extrema",
       {{"p_min", ext.p_min}, {"lambda_min", ext.lambda_min}, {"lambda_p1", ext.lambda_p1},
        {"lambda_pn2", ext.lambda_pn2}}},
  };
}

json spectral_json(const ConeParams& cone, int i_max, int j_max) {
  if (i_max < 0 || j_max < 0) throw InvalidInput("imax and jmax must be >= 0");
  json modes = json::array();
  for (int i = 0; i <= i_max; ++i) {
    for (int j = 0; j <= j_max; ++j) {
      json m;
      m["i"] = i;
      m["j"] = j;
      const double K = coupling_constant(cone, i, j);
      m["lambda_p"] = sphere_eigenvalue(cone.p, i);
      m["lambda_q"] = sphere_eigenvalue(cone.q, j);
      m["K"] = K;
      m["K_residual"] = rel_residual(coupling_constant_mu_form(cone, i, j), K);
      try {
        const auto roots = indicial_exponents(cone, i, j);
        m["nu_plus"] = roots.nu_plus;
        m["nu_minus"] = roots.nu_minus;
        m["vieta_residual"] = std::max(rel_residual(roots.nu_plus + roots.nu_minus, -(cone.n() - 2.0)),
                                       rel_residual(roots.nu_plus * roots.nu_minus, -K));
        const auto membership = mode_membership_report(cone, i, j);
        m["plus_branch"] = verdict_json(membership.plus_branch);
        m["minus_branch"] = verdict_json(membership.minus_branch);
      } catch (const DegenerateRootError& e) {
        m["error"] = e.what();
      }
      modes.push_back(std::move(m));
    }
  }
  const auto scan = negative_modes(cone, i_max, j_max);
  json neg = json::array();
  for (const auto& nm : scan.modes) neg.push_back({{"i", nm.i}, {"j", nm.j}, {"K", nm.K}});
  return {{"i_max", i_max},
          {"j_max", j_max},
          {"modes", modes},
          {"negative_modes", neg},
          {"negative_window_closed", scan.window_closed},
          {"sigma", sigma_exponent(cone)},
          {"yamabe_conformal_exponent", yamabe_metric_asymptotic(cone).conformal_factor_exponent}};
}

json dynamics_json(const DynParams& dp, const std::optional<ConeParams>& cone) {
  json d;
  d["n"] = dp.n;
  d["alpha"] = dp.alpha;
  d["alpha_critical"] = critical_exponent(dp.n);
  d["Q"] = dp.Q;
  d["a_bar"] = dp.a_bar;
  d["b_bar"] = dp.b_bar;
  d["s"] = dp.s;
  d["alpha_basic_exponent"] = -dp.shift;
  d["a_bar_tolerance"] = a_bar_tolerance(dp.n);
  d["origin_discriminant"] = origin_discriminant(dp);
  d["w2_discriminant"] = w2_discriminant(dp);
  if (dp.lambda) d["lambda"] = *dp.lambda;
  if (cone) {
    const double expected = 0.25 * (dp.n - 2.0) * (dp.n - 2.0) * mu_squared(*cone);
    d["discriminant_identity_residual"] = rel_residual(origin_discriminant(dp), expected);
    d["alpha_zero"] = alpha_zero(*cone);
  }
  json eqs = json::array();
  for (const auto& eq : equilibria(dp)) {
    const auto f = vector_field(dp, eq.location[0], eq.location[1]);
    eqs.push_back({{"name", eq.name},
                   {"x", eq.location[0]},
                   {"y", eq.location[1]},
                   {"kind", std::string(to_string(eq.kind))},
                   {"lambda_minus", complex_json(eq.eigvals[0])},
                   {"lambda_plus", complex_json(eq.eigvals[1])},
                   {"field_residual", std::hypot(f[0], f[1])}});
  }
  d["equilibria"] = eqs;
  if (is_critical(dp)) {
    d["first_integral_at_w2"] = dp.Q > 0.0 && dp.a_bar > 0.0 ? json(first_integral_at_w2(dp)) : json(nullptr);
  }
  return d;
}

json build_report(const Scenario& sc, const ReportOptions& opts) {
  json r;
  r["inputs"] = {{"scenario", scenario_to_json(sc)}, {"options", {{"imax", opts.i_max}, {"jmax", opts.j_max}}}};
  const auto cone = scenario_cone(sc);
  if (cone) {
    r["geometry"] = geometry_json(*cone);
    r["spectral"] = spectral_json(*cone, opts.i_max, opts.j_max);
  }
  const auto dp = scenario_dyn_params(sc);
  r["dynamics"] = dynamics_json(dp, cone);
  const auto label = classify_case(dp);
  r["case"] = {{"label", std::string(to_string(label.id))}, {"description", label.description}};
  if (sc.captioned_case) {
    r["case"]["captioned"] = std::string(to_string(*sc.captioned_case));
    r["case"]["matches_caption"] = *sc.captioned_case == label.id;
  }
  json fams = json::array();
  for (const auto& f : solution_families(dp, label, cone)) {
    json fj;
    fj["family"] = std::string(to_string(f.family));
    fj["w_exponent"] = f.w_exponent ? json(*f.w_exponent) : json(nullptr);
    fj["u_exponent"] = f.u_exponent ? json(*f.u_exponent) : json(nullptr);
    fj["verdict"] = f.verdict ? verdict_json(*f.verdict) : json(nullptr);
    fj["notes"] = f.notes;
    fams.push_back(std::move(fj));
  }
  r["families"] = fams;
  return r;
}

std::pair<Scenario, ReportOptions> inputs_from_report(const json& report) {
  if (!report.is_object() || !report.contains("inputs")) throw InvalidInput("report has no 'inputs' section");
  const auto& in = report.at("inputs");
  if (!in.contains("scenario")) throw InvalidInput("report inputs lack 'scenario'");
  ReportOptions opts;
  if (in.contains("options")) {
    opts.i_max = field<int>(in.at("options"), "imax");
    opts.j_max = field<int>(in.at("options"), "jmax");
  }
  return {scenario_from_json(in.at("scenario")), opts};
}

std::pair<Scenario, ReportOptions> inputs_from_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open report '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("report '" + path + "' is not valid JSON: " + e.what());
  }
  return inputs_from_report(j);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace conelap
