#include "conelap/cone_geometry.hpp"

#include <cmath>
#include <string>

#include "conelap/errors.hpp"

namespace conelap {

namespace {

constexpr double kBoundaryTolerance = 1e-12;

void require_positive_ell(double ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) {
    throw InvalidInput("ell must be positive and finite (the vertex l = 0 is singular), got " +
                       std::to_string(ell));
  }
}

}  // namespace

void validate(const ConeParams& cone) {
  if (cone.p < 1) throw InvalidInput("p must be >= 1, got " + std::to_string(cone.p));
  if (cone.q < 1) throw InvalidInput("q must be >= 1, got " + std::to_string(cone.q));
  if (!(cone.r_p > 0.0) || !std::isfinite(cone.r_p)) {
    throw InvalidInput("r_p must be positive and finite, got " + std::to_string(cone.r_p));
  }
  if (!(cone.r_q > 0.0) || !std::isfinite(cone.r_q)) {
    throw InvalidInput("r_q must be positive and finite, got " + std::to_string(cone.r_q));
  }
}

ConeParams make_cone(int p, int q, double r_p, double r_q) {
  ConeParams cone{p, q, r_p, r_q};
  validate(cone);
  return cone;
}

bool below_recommended_dimension(const ConeParams& cone) noexcept { return cone.n() < 5; }

std::string_view to_string(CaseSign sign) noexcept {
  switch (sign) {
    case CaseSign::Plus: return "Plus";
    case CaseSign::Minus: return "Minus";
    case CaseSign::Boundary: return "Boundary";
  }
  return "Boundary";
}

double lambda_factor(const ConeParams& cone) {
  const double p = cone.p;
  const double q = cone.q;
  const double rp2 = cone.r_p * cone.r_p;
  const double rq2 = cone.r_q * cone.r_q;
  return p * (p - 1.0) * (2.0 - rp2) / rp2 + q * (q - 1.0) * (2.0 - rq2) / rq2 - 2.0 * p * q;
}

double sphere_curvature_sum(const ConeParams& cone) {
  const double p = cone.p;
  const double q = cone.q;
  return p * (p - 1.0) / (cone.r_p * cone.r_p) + q * (q - 1.0) / (cone.r_q * cone.r_q);
}

double lambda_factor_rewritten(const ConeParams& cone) {
  const double n = cone.n();
  return -(n - 1.0) * (n - 2.0) + 2.0 * sphere_curvature_sum(cone);
}

double mu_squared(const ConeParams& cone) {
  const double n = cone.n();
  return 1.0 + lambda_factor(cone) / ((n - 1.0) * (n - 2.0));
}

double mu_squared_direct(const ConeParams& cone) {
  const double n = cone.n();
  return 2.0 * sphere_curvature_sum(cone) / ((n - 1.0) * (n - 2.0));
}

double scalar_curvature(const ConeParams& cone, double ell) {
  require_positive_ell(ell);
  return lambda_factor(cone) / (ell * ell);
}

double volume_density(const ConeParams& cone, double ell) {
  require_positive_ell(ell);
  const int n = cone.n();
  return std::pow(cone.r_p, cone.p) * std::pow(cone.r_q, cone.q) * std::pow(ell, n - 1) /
         std::pow(2.0, 0.5 * (n - 1));
}

double sphere_eigenvalue(int dim, int k) {
  if (dim < 1) throw InvalidInput("sphere dimension must be >= 1");
  if (k < 0) throw InvalidInput("eigenvalue index must be >= 0");
  const double kk = k;
  return kk * (kk + dim - 1.0);
}

double lambda_of_real_p(int n, double p, double r_p, double r_q) {
  const double s = 1.0 / (r_p * r_p) + 1.0 / (r_q * r_q);
  const double nn = n;
  return 2.0 * p * p * s - 2.0 * p * (s + (nn - 2.0) * 2.0 / (r_q * r_q)) +
         (nn - 1.0) * (nn - 2.0) * (2.0 / (r_q * r_q) - 1.0);
}

LambdaExtrema lambda_extrema(int n, double r_p, double r_q) {
  if (n < 3) throw InvalidInput("n must be >= 3");
  if (!(r_p > 0.0) || !(r_q > 0.0)) throw InvalidInput("radii must be positive");
  const double nn = n;
  const double rp2 = r_p * r_p;
  const double rq2 = r_q * r_q;

  LambdaExtrema out;
  out.p_min = 0.5 + (nn - 2.0) / (1.0 + rq2 / rp2);
  out.q_min = (nn - 1.0) - out.p_min;
  out.lambda_min = -(nn - 1.0) * (nn - 2.0) - 0.5 * (1.0 / rp2 + 1.0 / rq2) +
                   2.0 * (nn - 2.0) * (nn - 2.0) / (rp2 + rq2);
  out.lambda_p1 = -(nn - 1.0) * (nn - 2.0) + (nn - 2.0) * (nn - 3.0) * 2.0 / rq2;
  out.lambda_pn2 = -(nn - 1.0) * (nn - 2.0) + (nn - 2.0) * (nn - 3.0) * 2.0 / rp2;
  return out;
}

CaseSign case_sign(const ConeParams& cone) {
  const double n = cone.n();
  const double lhs = sphere_curvature_sum(cone);
  const double rhs = 2.0 * (n - 1.0) / (n - 2.0);
  if (std::abs(lhs - rhs) <= kBoundaryTolerance * rhs) return CaseSign::Boundary;
  return lhs > rhs ? CaseSign::Plus : CaseSign::Minus;
}

GeometrySummary summarize(const ConeParams& cone) {
  validate(cone);
  return GeometrySummary{lambda_factor(cone), mu_squared(cone), case_sign(cone), cone.n()};
}

}  // namespace conelap
