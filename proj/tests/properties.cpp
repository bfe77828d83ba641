// Randomized invariants. Every draw is reproducible from the fixed seed.
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conelap/errors.hpp"
#include "conelap/nonlinear_dynamics.hpp"
#include "conelap/ode_engine.hpp"
#include "conelap/spectral_linear.hpp"

using namespace conelap;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kDraws = 10000;

struct Draw {
  std::mt19937_64 rng{0x5eed'c0ffeeULL};

  int dim() { return std::uniform_int_distribution<int>(1, 9)(rng); }
  double radius() { return std::uniform_real_distribution<double>(0.3, 3.0)(rng); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
  ConeParams cone() {
    const int p = dim(), q = dim();
    const double rp = radius(), rq = radius();
    return make_cone(p, q, rp, rq);
  }
  // alpha in (1, alpha*], hitting alpha* now and then.
  double alpha(int n) {
    if (unit() < 0.05) return critical_exponent(n);
    return 1.0 + (critical_exponent(n) - 1.0) * (1.0 - unit());
  }
};

bool within_ulps(double a, double b, double scale, double ulps = 8.0) {
  return std::abs(a - b) <= ulps * kEps * scale;
}

}  // namespace

TEST_CASE("curvature factor: direct and rewritten forms") {
  Draw d;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    const double tp = c.p * (c.p - 1.0) / (c.r_p * c.r_p), tq = c.q * (c.q - 1.0) / (c.r_q * c.r_q);
    // Magnitude of the terms being summed, the natural unit for the rounding error.
    const double scale = 2.0 * (tp + tq) + (c.n() - 1.0) * (c.n() - 2.0);
    CHECK(within_ulps(lambda_factor(c), lambda_factor_rewritten(c), scale));
  }
}

TEST_CASE("mu squared") {
  Draw d;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    const double m = mu_squared(c);
    // p = q = 1 has no sphere curvature at all and mu^2 = 0 there.
    if (c.p == 1 && c.q == 1) {
      CHECK(m == 0.0);
    } else {
      CHECK(m > 0.0);
    }
    CHECK(m == 1.0 + lambda_factor(c) / ((c.n() - 1.0) * (c.n() - 2.0)));
  }
}

TEST_CASE("case sign agrees with sqrt(mu^2) > 2/(n-2)") {
  Draw d;
  int checked = 0;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    const double mu = std::sqrt(mu_squared(c));
    const double thr = 2.0 / (c.n() - 2.0);
    if (std::abs(mu - thr) < 1e-9 * thr) continue;
    CHECK((case_sign(c) == CaseSign::Plus) == (mu > thr));
    ++checked;
  }
  CHECK(checked > kDraws / 2);
}

TEST_CASE("lambda minimum over real p beats a grid") {
  Draw d;
  for (int k = 0; k < 300; ++k) {
    const int n = 4 + std::uniform_int_distribution<int>(0, 8)(d.rng);
    const double rp = d.radius(), rq = d.radius();
    const auto e = lambda_extrema(n, rp, rq);
    for (int g = 1; g <= 100; ++g) {
      const double p = 1.0 + (n - 3.0) * g / 101.0;
      const double v = lambda_of_real_p(n, p, rp, rq);
      CHECK(e.lambda_min <= v + 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST_CASE("volume density scales with l^{n-1}") {
  Draw d;
  for (int k = 0; k < 1000; ++k) {
    const auto c = d.cone();
    const double ell = 0.1 + 3.0 * d.unit(), s = 0.05 + 5.0 * d.unit();
    const double ratio = volume_density(c, s * ell) / volume_density(c, ell);
    CHECK(ratio == doctest::Approx(std::pow(s, c.n() - 1)).epsilon(1e-13));
  }
}

TEST_CASE("Vieta relations and the series denominator identity") {
  Draw d;
  int degenerate = 0;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    const int i = std::uniform_int_distribution<int>(0, 6)(d.rng), j = std::uniform_int_distribution<int>(0, 6)(d.rng);
    const double K = coupling_constant(c, i, j);
    IndicialRoots r;
    try {
      r = indicial_exponents(c, i, j);
    } catch (const DegenerateRootError&) {
      ++degenerate;
      continue;
    }
    const double scale_sum = std::abs(r.nu_plus) + std::abs(r.nu_minus);
    CHECK(within_ulps(r.nu_plus + r.nu_minus, -(c.n() - 2.0), scale_sum));
    CHECK(within_ulps(r.nu_plus * r.nu_minus, -K, std::abs(r.nu_plus * r.nu_minus) + std::abs(K)));

    const double nu = r.nu_plus;
    const int m = 2 * std::uniform_int_distribution<int>(0, 10)(d.rng);
    const double a = nu + m + 2.0;
    const double lhs = a * a + (c.n() - 2.0) * a - K;
    const double rhs = (m + 2.0) * (2.0 * nu + m + c.n());
    const double scale = a * a + std::abs((c.n() - 2.0) * a) + std::abs(K);
    CHECK(within_ulps(lhs, rhs, scale));
  }
  CHECK(degenerate < kDraws / 10);
}

TEST_CASE("mode (0,0) membership follows the plus/minus case") {
  Draw d;
  for (int k = 0; k < 3000; ++k) {
    const auto c = d.cone();
    const auto sign = case_sign(c);
    if (sign == CaseSign::Boundary) continue;
    ModeMembership m;
    try {
      m = mode_membership_report(c, 0, 0);
    } catch (const DegenerateRootError&) {
      continue;
    }
    CHECK(m.plus_branch.in_H2 == (sign == CaseSign::Plus));
    CHECK(m.minus_branch.in_L2 == (sign == CaseSign::Minus));
  }
}

TEST_CASE("coupling constants increase in both indices") {
  Draw d;
  for (int k = 0; k < 1000; ++k) {
    const auto c = d.cone();
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        CHECK(coupling_constant(c, i + 1, j) > coupling_constant(c, i, j));
        CHECK(coupling_constant(c, i, j + 1) > coupling_constant(c, i, j));
      }
    }
  }
}

TEST_CASE("b_bar sign and the origin discriminant identity") {
  Draw d;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    const double alpha = d.alpha(c.n());
    const auto dp = dyn_params(c, alpha, 1.0);
    if (alpha == critical_exponent(c.n())) {
      CHECK(dp.b_bar == 0.0);
    } else {
      CHECK(dp.b_bar < 0.0);
    }
    // Rounding in a_bar is relative to its largest term, not to the small result.
    const double shift = 2.0 / (alpha - 1.0);
    const double scale = std::max({dp.b_bar * dp.b_bar / 4.0, shift * shift, (c.n() - 2.0) * shift,
                                   std::abs(dp.a_bar), 0.25 * (c.n() - 2.0) * (c.n() - 2.0) * mu_squared(c)});
    CHECK(within_ulps(origin_discriminant(dp), 0.25 * (c.n() - 2.0) * (c.n() - 2.0) * mu_squared(c), scale));
  }
}

TEST_CASE("a_bar increases in s below 1 and is positive at s = 1") {
  Draw d;
  for (int k = 0; k < 2000; ++k) {
    const auto c = d.cone();
    const int n = c.n();
    const double L = lambda_factor(c);
    const double s = 0.02 + 0.97 * d.unit();
    const double h = 1e-6;
    CHECK((a_bar_of_s(n, L, s + h) - a_bar_of_s(n, L, s - h)) / (2 * h) > 0.0);
    CHECK(a_bar_of_s(n, L, 1.0) == doctest::Approx(0.25 * (n - 2.0) * (n - 2.0) * mu_squared(c)).epsilon(1e-12));
  }
}

TEST_CASE("s_0 and alpha_0 roots") {
  Draw d;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    const double mu = std::sqrt(mu_squared(c));
    const double coef = lambda_factor(c) / ((c.n() - 1.0) * (c.n() - 2.0));
    const double s0 = s_zero(mu);
    CHECK(std::abs(coef * s0 * s0 + 2.0 * s0 - 1.0) < 1e-12);
    // a_bar changes sign at alpha_0.
    const double a0 = alpha_zero(c);
    if (a0 < critical_exponent(c.n()) - 1e-6) {
      CHECK(dyn_params(c, a0 - 1e-7 * (a0 - 1.0), 1.0).a_bar < 0.0);
      CHECK(dyn_params(c, std::min(critical_exponent(c.n()), a0 + 1e-6), 1.0).a_bar > 0.0);
    }
  }
}

TEST_CASE("classification is total, families are consistent, equilibria are zeros") {
  Draw d;
  int overflowed = 0;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = d.cone();
    double alpha = d.alpha(c.n());
    const double u = d.unit();
    // Aim at the tie bands now and then.
    if (u < 0.1) alpha = alpha_zero(c) <= critical_exponent(c.n()) ? alpha_zero(c) : alpha;
    const double Qs[] = {-2.0, -0.3, 0.0, 0.4, 3.0};
    const double Q = Qs[std::uniform_int_distribution<int>(0, 4)(d.rng)];
    const auto dp = dyn_params(c, alpha, Q);
    CaseLabel label;
    REQUIRE_NOTHROW(label = classify_case(dp));
    CHECK(!label.description.empty());

    // Exact in real arithmetic; in doubles the sum of three rounded terms can
    // only vanish to within a few ulps of the largest.
    for (const auto& f : solution_families(dp, label, c)) {
      if (f.u_exponent && f.w_exponent) {
        const double scale = std::max({std::abs(*f.u_exponent), dp.shift, std::abs(*f.w_exponent)});
        CHECK(within_ulps(*f.u_exponent + dp.shift + *f.w_exponent, 0.0, scale, 4.0));
      }
    }
    // For alpha close to 1, x2 = (a_bar/Q)^{1/(alpha-1)} is huge and the field
    // value is a difference of two huge terms: absolute below unit scale, relative above.
    std::vector<Equilibrium> eqs;
    try {
      eqs = equilibria(dp);
    } catch (const NumericalFailure&) {
      // Only legitimate when ln x2 = ln(a_bar/Q)/(alpha-1) is past the double range.
      CHECK(std::log(dp.a_bar / dp.Q) / (dp.alpha - 1.0) > std::log(std::numeric_limits<double>::max()) - 1.0);
      ++overflowed;
      continue;
    }
    for (const auto& eq : eqs) {
      const auto v = vector_field(dp, eq.location[0], eq.location[1]);
      const double scale = std::max(1.0, std::abs(dp.a_bar * eq.location[0]));
      CHECK(std::hypot(v[0], v[1]) < 1e-12 * scale);
    }
  }
  MESSAGE(overflowed << " draws put w2 beyond double range");
}

TEST_CASE("forward then backward integration returns home") {
  Draw d;
  for (int k = 0; k < 40; ++k) {
    const auto c = d.cone();
    // alpha >= (n+4)/n keeps |b_bar| <= 2; heavier damping makes the backward
    // run exponentially sensitive and the comparison meaningless.
    const int n = c.n();
    const double alpha = (n + 4.0) / n + ((n + 2.0) / (n - 2.0) - (n + 4.0) / n) * d.unit();
    const auto dp = dyn_params(c, alpha, d.unit() < 0.5 ? 1.0 : -1.0);
    const std::array<double, 2> p{0.2 + 0.5 * d.unit(), d.unit() - 0.5};
    const double T = 0.5;
    const double tol = 1e-10;
    IntegrationOptions opts;
    opts.stop_at_equilibrium = false;
    opts.escape_radius = 1e3;
    const auto fwd = integrate(dp, p, T, tol, opts);
    if (fwd.terminated != Termination::TimeLimit) continue;
    const auto& e = fwd.samples.back();
    const auto back = integrate(dp, {e.x, e.y}, T, tol, opts, TimeDirection::Backward);
    if (back.terminated != Termination::TimeLimit) continue;
    double length = 0.0;
    for (std::size_t s = 1; s < fwd.samples.size(); ++s) {
      length += std::hypot(fwd.samples[s].x - fwd.samples[s - 1].x, fwd.samples[s].y - fwd.samples[s - 1].y);
    }
    const auto& h = back.samples.front();
    CHECK(std::hypot(h.x - p[0], h.y - p[1]) <= 10.0 * tol * length);
  }
}
