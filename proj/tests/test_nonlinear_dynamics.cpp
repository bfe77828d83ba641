#include "doctest.h"

#include <cmath>

#include "conelap/errors.hpp"
#include "conelap/nonlinear_dynamics.hpp"

using namespace conelap;
using doctest::Approx;

namespace {

double a_bar_oracle(int n, double lambda, double alpha) {
  const double c = 2.0 / (alpha - 1.0);
  return -c * c + (n - 2.0) * c + (n - 2.0) * lambda / (4.0 * (n - 1.0));
}

// Bisection root of a_bar(alpha) on (1, alpha*), independent of the closed form.
double a_bar_root(int n, double lambda) {
  double lo = 1.0 + 1e-9, hi = (n + 2.0) / (n - 2.0);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (a_bar_oracle(n, lambda, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("phase-plane coefficients") {
  const auto dp = dyn_params_from_curvature(7, 0.0, 1.2, -10.0);
  CHECK(dp.a_bar == Approx(-50.0).epsilon(1e-14));
  CHECK(dp.b_bar == Approx(-15.0).epsilon(1e-14));
  CHECK(dp.s == Approx(0.25).epsilon(1e-14));

  const auto fig3 = dyn_params_from_curvature(7, 0.0, 1.6, 5.0);
  CHECK(fig3.a_bar == Approx(50.0 / 9.0).epsilon(1e-14));
  CHECK(fig3.b_bar == Approx(-5.0 / 3.0).epsilon(1e-14));

  const auto c = make_cone(3, 3, 1.0, 1.0);
  const auto crit = dyn_params(c, critical_exponent(7), 1.0);
  CHECK(crit.b_bar == 0.0);
  CHECK(crit.a_bar == Approx(6.25 * 0.8).epsilon(1e-14));
  CHECK(crit.a_bar == Approx(a_bar_oracle(7, -6.0, 1.8)).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(dyn_params(c, 1.81, 1.0), doctest::Contains("(n+2)/(n-2)"), InvalidInput);
  CHECK_THROWS_AS(dyn_params(c, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(raw_dyn_params(1.0, 0.5, 1.0, 1.5, 7), InvalidInput);
  CHECK_THROWS_AS(raw_dyn_params(1.0, -1.0, 1.0, 1.5, 2), InvalidInput);
}

TEST_CASE("alpha_0 and s_0") {
  for (int n = 5; n <= 9; ++n) {
    const double a0 = alpha_zero_from_mu(n, 1.0);
    CHECK(a0 == Approx(1.0 + 2.0 / (n - 2.0)).epsilon(1e-15));
  }
  const auto flat = make_cone(3, 3, std::sqrt(2.0), std::sqrt(2.0));
  const double L = lambda_factor(flat);
  const double root = a_bar_root(flat.n(), L);
  CHECK(alpha_zero(flat) == Approx(root).epsilon(1e-12));
  CHECK(std::abs(dyn_params_from_curvature(7, 0.0, 1.4, 1.0).a_bar) < 1e-12);
  CHECK(a_bar_root(7, 0.0) == Approx(1.4).epsilon(1e-12));

  const double mu = std::sqrt(0.8);
  const double s0 = s_zero(mu);
  CHECK(std::abs(-6.0 / 30.0 * s0 * s0 + 2 * s0 - 1) < 1e-14);
  CHECK(a_bar_of_s(7, -6.0, s0) == Approx(0.0).epsilon(1e-13));
}

TEST_CASE("equilibria") {
  const auto dp = raw_dyn_params(5.5, -5.0 / 3.0, 5.0, 1.6, 7);
  const auto eqs = equilibria(dp);
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[1].location[0] == Approx(std::pow(1.1, 1.0 / 0.6)).epsilon(1e-14));
  CHECK(eqs[1].location[0] == Approx(1.1721).epsilon(1e-4));
  const double x2 = eqs[1].location[0];
  CHECK(std::abs(5.5 * x2 - 5.0 * std::pow(x2, 1.6)) < 1e-12);
  CHECK(eqs[0].kind == EquilibriumKind::Saddle);
  CHECK(eqs[1].kind == EquilibriumKind::StableFocus);
  CHECK(eqs[1].jac_a == Approx(5.5 * (1 - 1.6)));

  CHECK(equilibria(raw_dyn_params(5.5, -5.0 / 3.0, -5.0, 1.6, 7)).size() == 1);
  CHECK(equilibria(raw_dyn_params(-50.0, -15.0, 10.0, 1.2, 7)).size() == 1);

  // a_bar < 0: node or focus at the origin by the discriminant.
  CHECK(equilibria(raw_dyn_params(-50.0, -15.0, 10.0, 1.2, 7))[0].kind == EquilibriumKind::StableNode);
  CHECK(equilibria(raw_dyn_params(-50.0, -5.0, 10.0, 1.2, 7))[0].kind == EquilibriumKind::StableFocus);

  const auto c1 = raw_dyn_params(-50.0, -15.0, -10.0, 1.2, 7);
  const auto e1 = equilibria(c1);
  REQUIRE(e1.size() == 2);
  CHECK(e1[1].kind == EquilibriumKind::Saddle);
  // Eigenvalues of [[0,1],[a,b]] satisfy r^2 - b r - a = 0.
  for (const auto& eq : e1) {
    for (const auto& lam : eq.eigvals) {
      CHECK(std::abs(lam * lam - c1.b_bar * lam - eq.jac_a) < 1e-10 * (1 + std::abs(eq.jac_a)));
    }
  }
}

TEST_CASE("case classification of the labelled figure systems") {
  CHECK(classify_case(raw_dyn_params(-50, -15, -10, 1.2, 7)).id == CaseId::C1);
  CHECK(classify_case(raw_dyn_params(-50, -15, 10, 1.2, 7)).id == CaseId::C2);
  CHECK(classify_case(raw_dyn_params(5.5, -5.0 / 3, 5, 1.6, 7)).id == CaseId::C3);
  CHECK(classify_case(raw_dyn_params(5.5, -5.0 / 3, -5, 1.6, 7)).id == CaseId::C4);
  CHECK(classify_case(raw_dyn_params(5.5, -5.0 / 3, 0, 1.6, 7)).id == CaseId::C5plus);
  CHECK(classify_case(raw_dyn_params(-50, -15, 0, 1.2, 7)).id == CaseId::C5minus);
  CHECK(classify_case(raw_dyn_params(0, -5, 5, 1.4, 7)).id == CaseId::C6plus);
  CHECK(classify_case(raw_dyn_params(0, -5, -5, 1.4, 7)).id == CaseId::C6minus);
  CHECK(classify_case(raw_dyn_params(6.25, 0, 5, 1.8, 7)).id == CaseId::C7plus);
  CHECK(classify_case(raw_dyn_params(1, 0, -1, 1.8, 7)).id == CaseId::C7minus);
  // The labelled primed-figure coefficients have b^2/4 - a(alpha-1) = 1.1556 - 3.08 < 0.
  const auto labelled = raw_dyn_params(5.5, -2.15, 5.0, 1.56, 7);
  CHECK(w2_discriminant(labelled) < 0.0);
  CHECK(classify_case(labelled).id == CaseId::C3);
  CHECK(classify_case(raw_dyn_params(200.0 / 81, -35.0 / 9, 5, 1.45, 7)).id == CaseId::C3prime);
}

TEST_CASE("tie bands") {
  const double tol = a_bar_tolerance(7);
  CHECK(classify_case(raw_dyn_params(0.5 * tol, -5, 5, 1.4, 7)).id == CaseId::C6plus);
  CHECK(classify_case(raw_dyn_params(2.0 * tol, -5, 5, 1.4, 7)).id != CaseId::C6plus);
  const auto near_crit = raw_dyn_params(1.0, 0.0, 1.0, 1.8 - 1e-13, 7);
  CHECK(classify_case(near_crit).id == CaseId::C7plus);
}

TEST_CASE("solution families") {
  const auto cone = make_cone(3, 3, 3.0, 3.0);
  const auto dp = dyn_params(cone, 1.5, -1.0);
  const auto label = classify_case(dp);
  REQUIRE(label.id == CaseId::C1);
  const auto fams = solution_families(dp, label, cone);
  REQUIRE(fams.size() == 4);
  const double mu = std::sqrt(mu_squared(cone));
  for (const auto& f : fams) {
    if (f.w_exponent && f.u_exponent) CHECK(*f.u_exponent + dp.shift + *f.w_exponent == Approx(0.0));
    if (f.family == Family::Separatrix_s) {
      CHECK(*f.u_exponent + 3.5 == Approx(1.0 + 2.5 * mu).epsilon(1e-13));
      CHECK(*f.u_exponent == Approx(sigma_exponent(cone)).epsilon(1e-12));
      CHECK(f.verdict->in_H1);
      CHECK(f.verdict->in_H2 == (case_sign(cone) == CaseSign::Plus));
    }
    if (f.family == Family::C_zero) {
      CHECK(*f.u_exponent + 3.5 == Approx(1.0 - 2.5 * mu).epsilon(1e-13));
      CHECK_FALSE(f.verdict->in_H1);
    }
    if (f.family == Family::Separatrix_incoming) CHECK(*f.u_exponent == Approx(-4.0));
  }

  // Case 7+: Fowler family bounded by l^{-(n-2)/2}, in L2 but not H1.
  const auto crit = dyn_params(make_cone(3, 3, 1.0, 1.0), critical_exponent(7), 1.0);
  const auto f7 = solution_families(crit, classify_case(crit));
  REQUIRE(f7.front().family == Family::Fowler);
  CHECK(*f7.front().u_exponent == Approx(-2.5));
  CHECK(f7.front().verdict->in_L2);
  CHECK_FALSE(f7.front().verdict->in_H1);

  // C_infinity gets no L2 verdict above (n+4)/n unless a_bar < 0 on a plus-case cone.
  const auto c4 = dyn_params(make_cone(3, 3, 1.0, 1.0), 1.75, -1.0);
  const auto f4 = solution_families(c4, classify_case(c4));
  CHECK(f4.front().family == Family::C_infinity);
  CHECK_FALSE(f4.front().verdict.has_value());
  const auto c4low = dyn_params(make_cone(3, 3, 1.0, 1.0), 1.55, -1.0);
  REQUIRE(classify_case(c4low).id == CaseId::C4);
  CHECK(solution_families(c4low, classify_case(c4low)).front().verdict.has_value());
}

TEST_CASE("C2 on a minus-case cone") {
  const auto cone = make_cone(1, 2, 1.0, 1.0);
  REQUIRE(case_sign(cone) == CaseSign::Minus);
  const auto dp = dyn_params(cone, 1.5, 1.0);
  const auto label = classify_case(dp);
  REQUIRE(label.id == CaseId::C2);
  for (const auto& f : solution_families(dp, label, cone)) {
    if (f.family == Family::C_zero) {
      CHECK(f.verdict->in_L2);
      CHECK_FALSE(f.verdict->in_H1);
    }
  }
}

TEST_CASE("first integral") {
  const auto dp = dyn_params(make_cone(3, 3, 1.0, 1.0), critical_exponent(7), 2.0);
  CHECK(first_integral(dp, 0.0, 0.0) == 0.0);
  const double x2 = equilibria(dp)[1].location[0];
  CHECK(first_integral(dp, x2, 0.0) == Approx(-(2.0 / 7.0) * std::pow(dp.a_bar / 2.0, 3.5)).epsilon(1e-13));
  CHECK(first_integral_at_w2(dp) == Approx(first_integral(dp, x2, 0.0)).epsilon(1e-13));
  CHECK_THROWS_AS(first_integral(dyn_params(make_cone(3, 3, 1.0, 1.0), 1.5, 1.0), 0.1, 0.0), InvalidInput);
  CHECK_THROWS_AS(first_integral(dp, -0.1, 0.0), InvalidInput);
}

TEST_CASE("u from w") {
  const std::vector<WSample> constant{{0.0, 2.0}, {1.0, 2.0}, {2.0, 2.0}};
  const auto u = u_from_w(1.5, constant);
  REQUIRE(u.size() == 3);
  CHECK(u.front().ell < u.back().ell);
  for (const auto& s : u) CHECK(s.u == Approx(2.0 * std::pow(s.ell, -4.0)).epsilon(1e-13));
  CHECK(u.back().ell == 1.0);
  CHECK(u.back().u == 2.0);

  const double lm = -1.7;
  std::vector<WSample> decaying;
  for (int k = 0; k < 5; ++k) decaying.push_back({0.5 * k, std::exp(lm * 0.5 * k)});
  for (const auto& s : u_from_w(1.5, decaying)) {
    CHECK(s.u == Approx(std::pow(s.ell, -4.0 - lm)).epsilon(1e-12));
  }
}

TEST_CASE("perturbation bounds and Yamabe metric") {
  const auto dp = raw_dyn_params(-50, -15, -10, 1.2, 7);
  const auto b = perturbation_bounds(dp, 0.01);
  CHECK(b.rho == Approx(0.2));
  CHECK(b.lipschitz == Approx(1.2 * 10 * std::pow(0.01, 0.2)));
  CHECK(b.satisfied);
  const auto y = yamabe_metric_asymptotic(make_cone(3, 3, 1.0, 1.0));
  CHECK(y.conformal_factor_exponent == Approx(2.0 * (std::sqrt(0.8) - 1.0)).epsilon(1e-13));
}
