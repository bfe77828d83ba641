#include "conelap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "conelap/errors.hpp"
#include "conelap/scenarios.hpp"

namespace conelap {

namespace {

using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<500>>;

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Check make_check(std::string name, double value, double tol, std::string detail = {}) {
  return Check{std::move(name), value, tol, value <= tol, std::move(detail)};
}

struct Draw {
  ConeParams cone;
  double alpha = 0.0;
};

Draw random_draw(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 9);
  std::uniform_real_distribution<double> radius(0.3, 3.0);
  Draw d;
  d.cone = make_cone(dim(rng), dim(rng), radius(rng), radius(rng));
  const double crit = critical_exponent(d.cone.n());
  // (1, alpha*]: map u in [0,1) to alpha* - u (alpha* - 1).
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  d.alpha = crit - unit(rng) * (crit - 1.0);
  return d;
}

// Operator u'' + (n-1)/l u' + (Q1 - K/l^2) u applied term-wise to the truncated series.
Big series_residual(const BasicSeriesSolution<Big>& sol, const Big& K, const Big& ell) {
  const Big n(sol.n);
  Big acc(0);
  for (std::size_t m = 0; m < sol.coeffs.size(); ++m) {
    const Big e = sol.nu + Big(2 * m);
    const Big term = sol.coeffs[m] * pow(ell, e);
    acc += term * ((e * (e - 1) + (n - 1) * e - K) / (ell * ell) + sol.Q1);
  }
  return acc;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - sx / m) * (xs[k] - sx / m);
    sxy += (xs[k] - sx / m) * (ys[k] - sy / m);
  }
  return sxy / sxx;
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json suite_json(const SuiteResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  }
  return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

SuiteResult verify_identities(int draws, std::uint64_t seed) {
  if (draws < 1) throw InvalidInput("draws must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> mode(0, 6);
  double lam = 0, mu = 0, K = 0, disc = 0, vieta = 0, s0 = 0, a0 = 0;
  int double_roots = 0;
  for (int k = 0; k < draws; ++k) {
    const auto d = random_draw(rng);
    const auto& c = d.cone;
    const double n = c.n();
    const double L = lambda_factor(c);
    lam = std::max(lam, rel(lambda_factor_rewritten(c), L));
    const double mu_sq = mu_squared(c);
    mu = std::max(mu, rel(mu_squared_direct(c), mu_sq));
    const int i = mode(rng);
    const int j = mode(rng);
    const double Kij = coupling_constant(c, i, j);
    K = std::max(K, rel(coupling_constant_mu_form(c, i, j), Kij));
    const auto dp = dyn_params(c, d.alpha, 1.0);
    // b_bar^2/4 and a_bar are both ~4/(alpha-1)^2 and cancel; measure against that scale.
    const double target = 0.25 * (n - 2) * (n - 2) * mu_sq;
    const double operands = std::max({1.0, 0.25 * dp.b_bar * dp.b_bar, std::abs(dp.a_bar), target});
    disc = std::max(disc, std::abs(origin_discriminant(dp) - target) / operands);
    try {
      const auto roots = indicial_exponents(c, i, j);
      vieta = std::max({vieta, rel(roots.nu_plus + roots.nu_minus, -(n - 2)),
                        rel(roots.nu_plus * roots.nu_minus, -Kij)});
    } catch (const DegenerateRootError&) {
      ++double_roots;  // p = q = 1, mode (0,0): mu = 0
    }
    const double m = std::sqrt(mu_sq);
    const double s = s_zero(m);
    s0 = std::max(s0, std::abs(L / ((n - 1) * (n - 2)) * s * s + 2 * s - 1));
    const double az = alpha_zero(c);
    const double am1 = az - 1;
    // Scale by the largest term of a_bar so cancellation is measured relatively.
    const double scale = std::max({4 / (am1 * am1), 2 * (n - 2) / am1, std::abs((n - 2) * L / (4 * (n - 1)))});
    a0 = std::max(a0, std::abs(dyn_params_from_curvature(c.n(), L, az, 1.0).a_bar) / scale);
  }
  SuiteResult r{"identities", {}};
  const double tol = 1e-10;
  const std::string detail = std::to_string(draws) + " draws";
  r.checks.push_back(make_check("lambda_two_forms", lam, tol, detail));
  r.checks.push_back(make_check("mu_sq_two_forms", mu, tol, detail));
  r.checks.push_back(make_check("K_two_forms", K, tol, detail));
  r.checks.push_back(make_check("origin_discriminant_identity", disc, tol, detail));
  r.checks.push_back(make_check("indicial_vieta", vieta, tol,
                                detail + ", " + std::to_string(double_roots) + " double roots skipped"));
  r.checks.push_back(make_check("s_zero_root", s0, tol, detail));
  r.checks.push_back(make_check("alpha_zero_root", a0, tol, detail));
  return r;
}

SuiteResult verify_series(int instances, std::uint64_t seed, int M) {
  if (instances < 1) throw InvalidInput("instances must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 9);
  std::uniform_int_distribution<int> mode(0, 3);
  std::uniform_real_distribution<double> radius(0.3, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<double> ells{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

  SuiteResult r{"series", {}};
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    const auto cone = make_cone(dim(rng), dim(rng), radius(rng), radius(rng));
    const int i = mode(rng);
    const int j = mode(rng);
    const double Q1 = 5.0 * (1.0 - unit(rng));  // (0, 5]

    const Big p(cone.p), q(cone.q), rp(cone.r_p), rq(cone.r_q), n(cone.n());
    const Big lambda = -(n - 1) * (n - 2) + 2 * (p * (p - 1) / (rp * rp) + q * (q - 1) / (rq * rq));
    const Big K = (n - 2) * lambda / (4 * (n - 1)) + 2 * Big(i) * Big(i + cone.p - 1) / (rp * rp) +
                  2 * Big(j) * Big(j + cone.q - 1) / (rq * rq);
    const Big half = (n - 2) / 2;
    const Big nu = -half + sqrt(half * half + K);
    const auto sol = series_coefficients<Big>(nu, cone.n(), Big(Q1), Big(1), M);

    std::vector<double> xs, ys;
    for (double ell : ells) {
      const Big res = series_residual(sol, K, Big(ell));
      xs.push_back(std::log(ell));
      ys.push_back(static_cast<double>(log(abs(res))));
    }
    const double expected = static_cast<double>(nu) + 2.0 * M;
    const double err = std::abs(slope(xs, ys) - expected);
    worst = std::max(worst, err);
    std::ostringstream detail;
    detail.precision(10);
    detail << "p=" << cone.p << " q=" << cone.q << " rp=" << cone.r_p << " rq=" << cone.r_q << " mode=(" << i
           << "," << j << ") Q1=" << Q1 << " expected slope " << expected;
    r.checks.push_back(make_check("slope_" + std::to_string(k), err, 0.15, detail.str()));
  }
  r.checks.push_back(make_check("worst_slope_error", worst, 0.15));
  return r;
}

SuiteResult verify_figures() {
  SuiteResult r{"figures", {}};
  for (const auto& sc : figure_scenarios()) {
    const auto label = classify_case(scenario_dyn_params(sc));
    const bool ok = sc.captioned_case && label.id == *sc.captioned_case;
    r.checks.push_back(Check{sc.name, ok ? 0.0 : 1.0, 0.0, ok,
                             "classified " + std::string(to_string(label.id)) + ", captioned " +
                                 (sc.captioned_case ? std::string(to_string(*sc.captioned_case)) : "none")});
  }
  const auto dp = dyn_params_from_curvature(7, 0.0, 1.2, -10.0);
  const double err = std::max(std::abs(dp.a_bar + 50.0) / 50.0, std::abs(dp.b_bar + 15.0) / 15.0);
  // alpha = 1.2 is not exact in binary, so exact equality is checked to a few ulps.
  r.checks.push_back(make_check("fig7_1_derived_coefficients", err, 1e-14,
                                "n=7, Lambda=0, alpha=1.2 -> (-50, -15)"));
  return r;
}

std::vector<RepresentativeCase> representative_cases() {
  // p = q = 3: r = 3 gives mu^2 = 4/45 (alpha_0 ~ 1.616), r = 1 gives mu^2 = 4/5.
  return {
      {"case1", CaseId::C1, make_cone(3, 3, 3.0, 3.0), 1.5, -1.0},
      {"case2", CaseId::C2, make_cone(3, 3, 3.0, 3.0), 1.5, 1.0},
      {"case3", CaseId::C3, make_cone(3, 3, 1.0, 1.0), 1.75, 1.0},
      {"case4", CaseId::C4, make_cone(3, 3, 1.0, 1.0), 1.75, -1.0},
  };
}

ExponentRecovery recover_stable_exponent(const DynParams& dp, double tol) {
  const auto eqs = equilibria(dp);
  const auto& w1 = eqs.front();
  if (!w1.real_eigen()) throw InvalidInput("w1 has complex eigenvalues");
  const double lm = w1.eigvals[0].real();
  if (!(lm < 0.0)) throw InvalidInput("w1 has no stable direction");
  constexpr double offset = 1e-8;
  constexpr double r_hi = 1e-5;
  IntegrationOptions opts;
  opts.escape_radius = 10.0 * r_hi;
  opts.max_step = 0.05 / std::abs(lm);
  opts.stop_at_equilibrium = false;
  const double t_max = 3.0 * std::log(opts.escape_radius / offset) / std::abs(lm);
  const auto traj = shoot_separatrix(dp, w1, EigenDirection::Minus, offset, true, t_max, tol, opts);
  const auto window = window_by_distance(traj, w1.location, 2.0 * offset, r_hi);
  if (!window) throw NumericalFailure("separatrix never reached the fit window");
  ExponentRecovery out;
  out.analytic = lm;
  out.fit = estimate_exponent(traj, *window, w1.location);
  out.relative_error = std::abs(out.fit.rate - lm) / std::abs(lm);
  return out;
}

ExponentRecovery recover_slow_exponent(const DynParams& dp, double r0, double tol) {
  const auto eqs = equilibria(dp);
  const auto& w1 = eqs.front();
  if (!w1.real_eigen()) throw InvalidInput("w1 has complex eigenvalues");
  const double lp = w1.eigvals[1].real();
  const double lm = w1.eigvals[0].real();
  if (!(lp < 0.0)) throw InvalidInput("w1 is not a stable node");
  const auto& v = w1.eigvecs[1];
  const double len = std::hypot(v[0].real(), v[1].real());
  const std::array<double, 2> start{r0 * v[0].real() / len, r0 * v[1].real() / len};
  IntegrationOptions opts;
  opts.max_step = 0.05 / std::abs(lm);
  const double t_max = 1.2 * std::log(r0 / opts.equilibrium_radius) / std::abs(lp);
  const auto traj = integrate(dp, start, t_max, tol, opts);
  // Skip the start, where the nonlinear term still bends the orbit.
  const auto window = window_by_distance(traj, w1.location, 1e-7, r0 * 1e-2);
  if (!window) throw NumericalFailure("trajectory never reached the fit window");
  ExponentRecovery out;
  out.analytic = lp;
  out.fit = estimate_exponent(traj, *window, w1.location);
  out.relative_error = std::abs(out.fit.rate - lp) / std::abs(lp);
  return out;
}

SuiteResult verify_dynamics() {
  SuiteResult r{"dynamics", {}};
  for (const auto& rc : representative_cases()) {
    const auto dp = dyn_params(rc.cone, rc.alpha, rc.Q);
    const auto label = classify_case(dp);
    r.checks.push_back(Check{rc.name + "_label", label.id == rc.expected ? 0.0 : 1.0, 0.0,
                             label.id == rc.expected, std::string(to_string(label.id))});
    const auto rec = recover_stable_exponent(dp);
    std::ostringstream detail;
    detail.precision(10);
    detail << "lambda_- = " << rec.analytic << ", fitted " << rec.fit.rate << ", r^2 = " << rec.fit.r_squared;
    r.checks.push_back(make_check(rc.name + "_lambda_minus", rec.relative_error, 0.01, detail.str()));
    if (label.id == CaseId::C1 || label.id == CaseId::C2) {
      const auto slow = recover_slow_exponent(dp);
      std::ostringstream d2;
      d2.precision(10);
      d2 << "lambda_+ = " << slow.analytic << ", fitted " << slow.fit.rate;
      r.checks.push_back(make_check(rc.name + "_lambda_plus", slow.relative_error, 0.01, d2.str()));
    }
  }
  return r;
}

FowlerRun fowler_orbit(const DynParams& dp, double tol) {
  if (!is_critical(dp) || !(dp.Q > 0.0) || !(dp.a_bar > 0.0)) {
    throw InvalidInput("Fowler orbits need alpha = alpha*, Q > 0 and a_bar > 0");
  }
  const auto eqs = equilibria(dp);
  const double x2 = eqs.at(1).location[0];
  const double period_lin = 2.0 * std::numbers::pi / std::sqrt(dp.a_bar * (dp.alpha - 1.0));
  IntegrationOptions opts;
  opts.stop_at_equilibrium = false;
  opts.max_step = period_lin / 50.0;

  double t_max = 20.0 * period_lin;
  std::vector<double> ups;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const auto probe = integrate(dp, {0.5 * x2, 0.0}, t_max, tol, opts);
    ups = upcrossing_times(probe);
    if (ups.size() >= 10) break;
    t_max *= 2.0;
  }
  if (ups.size() < 10) throw NumericalFailure("fewer than ten periods detected");

  const auto traj = integrate(dp, {0.5 * x2, 0.0}, ups[9], tol, opts);
  FowlerRun run;
  run.n = dp.n;
  run.periods = 10;
  run.period = ups[9] / 10.0;
  run.drift = hamiltonian_drift(dp, traj);
  run.I_w2 = first_integral_at_w2(dp);
  run.I_min = std::numeric_limits<double>::infinity();
  run.I_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples) {
    const double I = first_integral(dp, s.x, s.y);
    run.I_min = std::min(run.I_min, I);
    run.I_max = std::max(run.I_max, I);
  }
  return run;
}

SuiteResult verify_fowler() {
  SuiteResult r{"fowler", {}};
  const std::vector<ConeParams> cones{make_cone(2, 2, 1.0, 1.0), make_cone(2, 3, 1.0, 1.0), make_cone(3, 3, 1.0, 1.0)};
  for (const auto& cone : cones) {
    const auto dp = dyn_params(cone, critical_exponent(cone.n()), 1.0);
    const auto run = fowler_orbit(dp);
    const std::string tag = "n" + std::to_string(cone.n());
    std::ostringstream detail;
    detail.precision(10);
    detail << "period " << run.period << ", I in [" << run.I_min << ", " << run.I_max << "], I(w2) = " << run.I_w2;
    r.checks.push_back(make_check(tag + "_drift", run.drift, 1e-8, detail.str()));
    const bool inside = run.I_min > run.I_w2 && run.I_max < 0.0;
    r.checks.push_back(Check{tag + "_I_between_w2_and_0", inside ? 0.0 : 1.0, 0.0, inside, detail.str()});
  }
  return r;
}

}  // namespace conelap
