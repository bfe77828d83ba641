#include "conelap/spectral_linear.hpp"

#include <cmath>
#include <string>

namespace conelap {

namespace {

constexpr double kDoubleRootTolerance = 1e-14;

void require_mode(int i, int j) {
  if (i < 0 || j < 0) throw InvalidInput("mode indices must be >= 0");
}

// lambda_i^p / r_p^2 + lambda_j^q / r_q^2
double angular_weight(const ConeParams& cone, int i, int j) {
  return sphere_eigenvalue(cone.p, i) / (cone.r_p * cone.r_p) +
         sphere_eigenvalue(cone.q, j) / (cone.r_q * cone.r_q);
}

}  // namespace

double coupling_constant(const ConeParams& cone, int i, int j) {
  require_mode(i, j);
  const double n = cone.n();
  return (n - 2.0) / (4.0 * (n - 1.0)) * lambda_factor(cone) +
         2.0 / (cone.r_p * cone.r_p) * sphere_eigenvalue(cone.p, i) +
         2.0 / (cone.r_q * cone.r_q) * sphere_eigenvalue(cone.q, j);
}

double coupling_constant_mu_form(const ConeParams& cone, int i, int j) {
  require_mode(i, j);
  const double n = cone.n();
  return 2.0 * angular_weight(cone, i, j) + (n - 2.0) * (n - 2.0) * (mu_squared_direct(cone) - 1.0) / 4.0;
}

IndicialRoots indicial_exponents(const ConeParams& cone, int i, int j) {
  const double half = 0.5 * (cone.n() - 2.0);
  const double disc = half * half + coupling_constant(cone, i, j);
  if (disc < kDoubleRootTolerance) {
    throw DegenerateRootError("indicial equation has a double root for mode (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
  }
  // nu_minus never cancels; nu_plus comes from the product -K to stay accurate near K = 0.
  const double K = coupling_constant(cone, i, j);
  const double nu_minus = -half - std::sqrt(disc);
  return IndicialRoots{nu_minus, -K / nu_minus};
}

double indicial_spread(const ConeParams& cone, int i, int j) {
  require_mode(i, j);
  const double n = cone.n();
  return 0.5 * (n - 2.0) *
         std::sqrt(mu_squared_direct(cone) + 8.0 / ((n - 2.0) * (n - 2.0)) * angular_weight(cone, i, j));
}

SpectralMode spectral_mode(const ConeParams& cone, int i, int j) {
  const auto roots = indicial_exponents(cone, i, j);
  SpectralMode mode;
  mode.i = i;
  mode.j = j;
  mode.lambda_p = sphere_eigenvalue(cone.p, i);
  mode.lambda_q = sphere_eigenvalue(cone.q, j);
  mode.K = coupling_constant(cone, i, j);
  mode.nu_plus = roots.nu_plus;
  mode.nu_minus = roots.nu_minus;
  return mode;
}

SeriesSolution mode_series(const ConeParams& cone, int i, int j, double Q1, double a0, int M) {
  return series_coefficients<double>(indicial_exponents(cone, i, j).nu_plus, cone.n(), Q1, a0, M);
}

SobolevVerdict sobolev_verdict(double exponent_q, int n) {
  SobolevVerdict v;
  v.exponent_q = exponent_q;
  const double bound = exponent_q + 0.5 * n;
  v.in_L2 = 0.0 < bound;
  v.in_H1 = 1.0 < bound;
  v.in_H2 = 2.0 < bound;
  v.max_order = bound > 0.0 ? static_cast<int>(std::ceil(bound)) - 1 : -1;
  return v;
}

ModeMembership mode_membership_report(const ConeParams& cone, int i, int j) {
  const auto roots = indicial_exponents(cone, i, j);
  return ModeMembership{sobolev_verdict(roots.nu_plus, cone.n()),
                        sobolev_verdict(roots.nu_minus, cone.n())};
}

NegativeModeScan negative_modes(const ConeParams& cone, int i_max, int j_max) {
  if (i_max < 0 || j_max < 0) throw InvalidInput("search window bounds must be >= 0");
  NegativeModeScan scan;
  bool rows_closed = false;
  bool cols_closed = true;
  for (int i = 0; i <= i_max; ++i) {
    if (coupling_constant(cone, i, 0) > 0.0) {
      rows_closed = true;
      break;
    }
    bool row_closed = false;
    for (int j = 0; j <= j_max; ++j) {
      const double K = coupling_constant(cone, i, j);
      if (K > 0.0) {
        row_closed = true;
        break;
      }
      scan.modes.push_back(NegativeMode{i, j, K});
    }
    cols_closed = cols_closed && row_closed;
  }
  scan.window_closed = rows_closed && cols_closed;
  return scan;
}

std::string_view to_string(Positivity p) noexcept {
  switch (p) {
    case Positivity::PositiveDefinite: return "PositiveDefinite";
    case Positivity::ConditionallyPositive: return "ConditionallyPositive";
    case Positivity::Indefinite: return "Indefinite";
    case Positivity::Unknown: return "Unknown";
  }
  return "Unknown";
}

Positivity positivity_report(const ConeParams& cone, bool integral_R_positive) {
  if (lambda_factor(cone) > 0.0) return Positivity::PositiveDefinite;
  if (coupling_constant(cone, 1, 0) > 0.0 && coupling_constant(cone, 0, 1) > 0.0) {
    return integral_R_positive ? Positivity::ConditionallyPositive : Positivity::Indefinite;
  }
  return Positivity::Unknown;
}

}  // namespace conelap
