#include "conelap/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "conelap/errors.hpp"
#include "conelap/portrait_io.hpp"
#include "conelap/report.hpp"
#include "conelap/scenarios.hpp"
#include "conelap/verification.hpp"

namespace conelap {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ConeFlags {
  std::optional<int> p, q;
  std::optional<double> rp, rq;

  void add(CLI::App* app) {
    app->add_option("--p", p, "dimension of the first sphere factor");
    app->add_option("--q", q, "dimension of the second sphere factor");
    app->add_option("--rp", rp, "radius r_p");
    app->add_option("--rq", rq, "radius r_q");
  }
  bool any() const { return p || q || rp || rq; }
  ConeParams get() const {
    if (!p || !q || !rp || !rq) throw InvalidInput("cone needs all of --p, --q, --rp, --rq");
    return make_cone(*p, *q, *rp, *rq);
  }
};

// --scenario | --config | --from-report | cone flags + alpha/Q | raw flags + alpha/Q.
struct ScenarioFlags {
  std::string scenario, config, from_report;
  ConeFlags cone;
  std::optional<double> alpha, Q, a_bar, b_bar;
  std::optional<int> n;

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "stored figure scenario (see `scenarios`)");
    app->add_option("--config", config, "key=value parameter file");
    app->add_option("--from-report", from_report, "reload the inputs echoed in a JSON report");
    cone.add(app);
    app->add_option("--alpha", alpha, "nonlinearity exponent, 1 < alpha <= (n+2)/(n-2)");
    app->add_option("--Q", Q, "right-hand side constant");
    app->add_option("--a-bar", a_bar, "raw coefficient a_bar");
    app->add_option("--b-bar", b_bar, "raw coefficient b_bar");
    app->add_option("--n", n, "dimension for raw coefficients");
  }

  // Returns the scenario and, for --from-report, the echoed report options.
  std::pair<Scenario, std::optional<ReportOptions>> resolve() const {
    const bool raw = a_bar || b_bar || n;
    const int sources = !scenario.empty() + !config.empty() + !from_report.empty() + (cone.any() || raw);
    if (sources != 1) {
      throw InvalidInput("give exactly one of --scenario, --config, --from-report or explicit parameters");
    }
    if (!scenario.empty()) return {find_scenario(scenario), std::nullopt};
    if (!config.empty()) return {load_config(config), std::nullopt};
    if (!from_report.empty()) {
      auto [sc, opts] = inputs_from_report_file(from_report);
      return {std::move(sc), opts};
    }
    if (cone.any() && raw) throw InvalidInput("ambiguous parameters: both cone and raw flags given");
    if (!alpha || !Q) throw InvalidInput("--alpha and --Q are required");
    Scenario sc;
    sc.name = "command-line";
    sc.source = ScenarioSource::UserConfig;
    if (cone.any()) {
      sc.params = ConeForm{cone.get(), *alpha, *Q};
    } else {
      if (!a_bar || !b_bar || !n) throw InvalidInput("raw form needs --a-bar, --b-bar and --n");
      sc.params = RawForm{*a_bar, *b_bar, *Q, *alpha, *n};
    }
    scenario_dyn_params(sc);
    return {sc, std::nullopt};
  }
};

void print_verdict(std::ostream& out, const SobolevVerdict& v) {
  out << "q=" << num(v.exponent_q) << " L2=" << v.in_L2 << " H1=" << v.in_H1 << " H2=" << v.in_H2
      << " max_order=" << v.max_order;
}

void print_geometry(std::ostream& out, const ConeParams& cone) {
  out << "n = " << cone.n() << "\n";
  out << "lambda = " << num(lambda_factor(cone)) << "\n";
  out << "mu_sq = " << num(mu_squared(cone)) << "\n";
  out << "case = " << to_string(case_sign(cone)) << "\n";
  if (below_recommended_dimension(cone)) out << "warning: n < 5, several asymptotic results assume n >= 5\n";
}

void print_spectral(std::ostream& out, const ConeParams& cone, int i_max, int j_max) {
  out << "i j K nu_plus nu_minus\n";
  for (int i = 0; i <= i_max; ++i) {
    for (int j = 0; j <= j_max; ++j) {
      out << i << ' ' << j << ' ' << num(coupling_constant(cone, i, j));
      try {
        const auto roots = indicial_exponents(cone, i, j);
        out << ' ' << num(roots.nu_plus) << ' ' << num(roots.nu_minus) << "\n";
      } catch (const DegenerateRootError&) {
        out << " degenerate degenerate\n";
      }
    }
  }
  const auto scan = negative_modes(cone, i_max, j_max);
  out << "negative modes:";
  for (const auto& m : scan.modes) out << " (" << m.i << "," << m.j << ")";
  out << (scan.window_closed ? "" : " [window not closed]") << "\n";
}

void print_classification(std::ostream& out, const Scenario& sc) {
  const auto dp = scenario_dyn_params(sc);
  const auto label = classify_case(dp);
  out << "scenario = " << sc.name << "\n";
  out << "a_bar = " << num(dp.a_bar) << "\nb_bar = " << num(dp.b_bar) << "\nQ = " << num(dp.Q)
      << "\nalpha = " << num(dp.alpha) << "\nn = " << dp.n << "\n";
  out << "case = " << to_string(label.id) << " (" << label.description << ")\n";
  for (const auto& f : solution_families(dp, label, scenario_cone(sc))) {
    out << "family " << to_string(f.family);
    if (f.u_exponent) out << " u~l^" << num(*f.u_exponent);
    if (f.verdict) {
      out << " [";
      print_verdict(out, *f.verdict);
      out << "]";
    }
    out << "\n";
  }
}

std::pair<int, int> parse_grid(const std::string& g) {
  int nx = 0, ny = 0;
  char sep = 0;
  std::istringstream in(g);
  if (!(in >> nx >> sep >> ny) || (sep != 'x' && sep != 'X') || !in.eof() || nx < 0 || ny < 0) {
    throw InvalidInput("--grid expects NXxNY, got '" + g + "'");
  }
  return {nx, ny};
}

int run_verify(std::ostream& out, const std::string& suite, int draws, int instances, std::uint64_t seed,
               bool as_json) {
  std::vector<SuiteResult> results;
  const auto want = [&](const char* s) { return suite == "all" || suite == s; };
  if (want("identities")) results.push_back(verify_identities(draws, seed));
  if (want("series")) results.push_back(verify_series(instances, seed));
  if (want("figures")) results.push_back(verify_figures());
  if (want("dynamics")) results.push_back(verify_dynamics());
  if (want("fowler")) results.push_back(verify_fowler());
  bool ok = true;
  if (as_json) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : results) all.push_back(suite_json(r));
    out << dump(all);
  }
  for (const auto& r : results) {
    ok = ok && r.passed();
    if (as_json) continue;
    for (const auto& c : r.checks) {
      out << (c.passed ? "PASS " : "FAIL ") << r.suite << "/" << c.name << " value=" << num(c.value)
          << " tol=" << num(c.tolerance);
      if (!c.detail.empty()) out << " (" << c.detail << ")";
      out << "\n";
    }
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conelap: Yamabe-type equations on cones over S^p x S^q", "conelap"};
  app.require_subcommand(1);

  bool as_json = false;

  auto* geometry = app.add_subcommand("geometry", "curvature factor, mu^2 and plus/minus case");
  ConeFlags g_cone;
  std::string g_scenario;
  g_cone.add(geometry);
  geometry->add_option("--scenario", g_scenario, "cone-form scenario");
  geometry->add_flag("--json", as_json, "JSON output");

  auto* spectral = app.add_subcommand("spectral", "coupling constants and indicial exponents per mode");
  ConeFlags s_cone;
  int imax = 2, jmax = 2;
  s_cone.add(spectral);
  spectral->add_option("--imax", imax, "largest mode index on S^p")->check(CLI::NonNegativeNumber);
  spectral->add_option("--jmax", jmax, "largest mode index on S^q")->check(CLI::NonNegativeNumber);
  spectral->add_flag("--json", as_json, "JSON output");

  auto* series = app.add_subcommand("series", "Frobenius series of a linear mode");
  ConeFlags se_cone;
  int mode_i = 0, mode_j = 0, trunc_M = kDefaultTruncation;
  double Q1 = 1.0, a0 = 1.0;
  std::vector<double> ells;
  se_cone.add(series);
  series->add_option("--i", mode_i, "mode index on S^p");
  series->add_option("--j", mode_j, "mode index on S^q");
  series->add_option("--Q1", Q1, "linear eigenvalue parameter");
  series->add_option("--a0", a0, "leading coefficient");
  series->add_option("--M", trunc_M, "truncation order");
  series->add_option("--ell", ells, "evaluation points");
  series->add_flag("--json", as_json, "JSON output");

  auto* classify = app.add_subcommand("classify", "case label and solution families");
  ScenarioFlags c_flags;
  c_flags.add(classify);
  classify->add_option("--imax", imax, "spectral window")->check(CLI::NonNegativeNumber);
  classify->add_option("--jmax", jmax, "spectral window")->check(CLI::NonNegativeNumber);
  classify->add_flag("--json", as_json, "full JSON report");

  auto* phase = app.add_subcommand("phase", "equilibria, eigen-data and an optional trajectory");
  ScenarioFlags p_flags;
  std::optional<double> x0, y0;
  double tmax = 10.0, tol = 1e-8;
  std::string csv_path, svg_path;
  p_flags.add(phase);
  phase->add_option("--x0", x0, "initial x (>= 0)");
  phase->add_option("--y0", y0, "initial y");
  phase->add_option("--tmax", tmax, "integration time");
  phase->add_option("--tol", tol, "integrator tolerance");
  phase->add_option("--csv", csv_path, "trajectory CSV output");
  phase->add_flag("--json", as_json, "JSON output");

  auto* portrait = app.add_subcommand("portrait", "grid of trajectories as CSV/SVG");
  ScenarioFlags pt_flags;
  std::string grid = "8x8";
  std::optional<double> xmin, xmax, ymin, ymax;
  unsigned threads = 0;
  pt_flags.add(portrait);
  portrait->add_option("--grid", grid, "seed grid NXxNY");
  portrait->add_option("--tmax", tmax, "integration time per seed");
  portrait->add_option("--tol", tol, "integrator tolerance");
  portrait->add_option("--xmin", xmin, "seed window");
  portrait->add_option("--xmax", xmax, "seed window");
  portrait->add_option("--ymin", ymin, "seed window");
  portrait->add_option("--ymax", ymax, "seed window");
  portrait->add_option("--threads", threads, "worker threads (0 = hardware)");
  portrait->add_option("--csv", csv_path, "CSV output path");
  portrait->add_option("--svg", svg_path, "SVG output path");
  portrait->add_flag("--json", as_json, "JSON summary");

  auto* verify = app.add_subcommand("verify", "self-check suites");
  std::string suite = "all";
  int draws = 10000, instances = 20;
  std::uint64_t seed = 20240601;
  verify->add_option("--suite", suite, "identities|series|figures|dynamics|fowler|all")
      ->check(CLI::IsMember({"identities", "series", "figures", "dynamics", "fowler", "all"}));
  verify->add_option("--draws", draws, "random draws for the identity suite")->check(CLI::PositiveNumber);
  verify->add_option("--instances", instances, "random instances for the series suite")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_flag("--json", as_json, "JSON output");

  auto* scenarios = app.add_subcommand("scenarios", "list stored figure scenarios");
  scenarios->add_flag("--json", as_json, "JSON output");

  std::vector<std::string> argv_store{"conelap"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (geometry->parsed()) {
      ConeParams cone;
      if (!g_scenario.empty()) {
        const auto c = scenario_cone(find_scenario(g_scenario));
        if (!c) throw InvalidInput("scenario '" + g_scenario + "' has no cone parameters");
        cone = *c;
      } else {
        cone = g_cone.get();
      }
      if (as_json) {
        out << dump(geometry_json(cone));
      } else {
        print_geometry(out, cone);
      }
    } else if (spectral->parsed()) {
      const auto cone = s_cone.get();
      if (as_json) {
        out << dump(spectral_json(cone, imax, jmax));
      } else {
        print_spectral(out, cone, imax, jmax);
      }
    } else if (series->parsed()) {
      const auto cone = se_cone.get();
      const auto sol = mode_series(cone, mode_i, mode_j, Q1, a0, trunc_M);
      if (as_json) {
        nlohmann::json j;
        j["nu"] = sol.nu;
        j["Q1"] = sol.Q1;
        j["M"] = sol.truncation_M;
        j["coefficients"] = sol.coeffs;
        nlohmann::json vals = nlohmann::json::array();
        for (double ell : ells) vals.push_back({{"ell", ell}, {"u", eval_series(sol, ell)}});
        j["values"] = vals;
        out << dump(j);
      } else {
        out << "nu = " << num(sol.nu) << "\n";
        for (std::size_t k = 0; k < sol.coeffs.size(); ++k) out << "a_" << 2 * k << " = " << num(sol.coeffs[k]) << "\n";
        for (double ell : ells) out << "u(" << num(ell) << ") = " << num(eval_series(sol, ell)) << "\n";
      }
    } else if (classify->parsed()) {
      const auto [sc, echoed] = c_flags.resolve();
      const ReportOptions opts = echoed.value_or(ReportOptions{imax, jmax});
      if (as_json) {
        out << dump(build_report(sc, opts));
      } else {
        print_classification(out, sc);
      }
    } else if (phase->parsed()) {
      const auto sc = p_flags.resolve().first;
      const auto dp = scenario_dyn_params(sc);
      std::optional<Trajectory> traj;
      if (x0 || y0) traj = integrate(dp, {x0.value_or(0.0), y0.value_or(0.0)}, tmax, tol);
      if (!csv_path.empty()) {
        if (!traj) throw InvalidInput("--csv needs --x0/--y0");
        PortraitRun run;
        run.seeds.push_back(PortraitSeed{0, x0.value_or(0.0), y0.value_or(0.0), traj, {}});
        write_csv_file(csv_path, run);
      }
      if (as_json) {
        nlohmann::json j = dynamics_json(dp, scenario_cone(sc));
        if (traj) {
          j["trajectory"] = {{"samples", traj->samples.size()},
                             {"terminated", std::string(to_string(traj->terminated))},
                             {"steps_accepted", traj->steps_accepted},
                             {"steps_rejected", traj->steps_rejected},
                             {"tol", traj->tol_used},
                             {"final", {traj->samples.back().t, traj->samples.back().x, traj->samples.back().y}}};
        }
        out << dump(j);
      } else {
        for (const auto& eq : equilibria(dp)) {
          out << eq.name << " at (" << num(eq.location[0]) << ", " << num(eq.location[1]) << ") "
              << to_string(eq.kind) << " lambda_- = " << num(eq.eigvals[0].real());
          if (eq.eigvals[0].imag() != 0.0) out << (eq.eigvals[0].imag() < 0 ? " - " : " + ") << num(std::abs(eq.eigvals[0].imag())) << "i";
          out << ", lambda_+ = " << num(eq.eigvals[1].real());
          if (eq.eigvals[1].imag() != 0.0) out << " + " << num(eq.eigvals[1].imag()) << "i";
          out << "\n";
        }
        if (traj) {
          const auto& last = traj->samples.back();
          out << "trajectory: " << traj->samples.size() << " samples, " << to_string(traj->terminated)
              << ", final (" << num(last.t) << ", " << num(last.x) << ", " << num(last.y) << ")\n";
        }
      }
    } else if (portrait->parsed()) {
      const auto sc = pt_flags.resolve().first;
      const auto dp = scenario_dyn_params(sc);
      const auto [nx, ny] = parse_grid(grid);
      double span = 1.0;
      const auto eqs = equilibria(dp);
      if (eqs.size() > 1) span = 1.5 * eqs[1].location[0];
      const double yspan = span * std::sqrt(std::max(1.0, std::abs(dp.a_bar)));
      PortraitSpec spec;
      spec.x_range = {xmin.value_or(0.0), xmax.value_or(span)};
      spec.y_range = {ymin.value_or(-yspan), ymax.value_or(yspan)};
      spec.nx = nx;
      spec.ny = ny;
      spec.t_max = tmax;
      spec.tol = tol;
      const auto run = sample_portrait(dp, spec, threads);
      if (!csv_path.empty()) write_csv_file(csv_path, run);
      if (!svg_path.empty()) {
        if (spec.x_range.second <= spec.x_range.first || spec.y_range.second <= spec.y_range.first) {
          throw InvalidInput("SVG output needs a seed window with positive width and height");
        }
        write_svg_file(svg_path, run, spec.x_range, spec.y_range);
      }
      std::size_t ok_count = 0;
      for (const auto& s : run.seeds) ok_count += s.trajectory.has_value();
      if (as_json) {
        nlohmann::json seeds = nlohmann::json::array();
        for (const auto& s : run.seeds) {
          nlohmann::json sj{{"id", s.index}, {"x0", s.x0}, {"y0", s.y0}};
          if (s.trajectory) {
            sj["terminated"] = std::string(to_string(s.trajectory->terminated));
            sj["samples"] = s.trajectory->samples.size();
          } else {
            sj["error"] = s.error;
          }
          seeds.push_back(std::move(sj));
        }
        out << dump({{"scenario", sc.name},
                     {"case", std::string(to_string(classify_case(dp).id))},
                     {"seeds", seeds},
                     {"x_range", {spec.x_range.first, spec.x_range.second}},
                     {"y_range", {spec.y_range.first, spec.y_range.second}}});
      } else {
        out << "scenario = " << sc.name << "\nseeds = " << run.seeds.size() << "\ntrajectories = " << ok_count
            << "\n";
        for (const auto& s : run.seeds) {
          if (!s.trajectory) out << "seed " << s.index << " failed: " << s.error << "\n";
        }
      }
    } else if (verify->parsed()) {
      return run_verify(out, suite, draws, instances, seed, as_json);
    } else if (scenarios->parsed()) {
      if (as_json) {
        nlohmann::json all = nlohmann::json::array();
        for (const auto& sc : figure_scenarios()) all.push_back(scenario_to_json(sc));
        out << dump(all);
      } else {
        for (const auto& sc : figure_scenarios()) {
          out << std::left << std::setw(9) << sc.name << ' ' << std::setw(8)
              << to_string(classify_case(scenario_dyn_params(sc)).id) << ' ' << sc.notes << "\n";
        }
      }
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace conelap
