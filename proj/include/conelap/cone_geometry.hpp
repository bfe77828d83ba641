#pragma once

// Closed-form geometry of the metric cone over S^p(r_p) x S^q(r_q) embedded
// in R^{p+1} x R^{q+1}:
//
//   g_K = dl^2 + (r_p^2 l^2 / 2) dtheta^2 + (r_q^2 l^2 / 2) dpsi^2,
//
// with scalar curvature R = Lambda / l^2.

#include <string_view>

namespace conelap {

struct ConeParams {
  int p = 1;
  int q = 1;
  double r_p = 1.0;
  double r_q = 1.0;

  int n() const noexcept { return p + q + 1; }
};

// Validates p, q >= 1 and positive finite radii; throws InvalidInput otherwise.
ConeParams make_cone(int p, int q, double r_p, double r_q);
void validate(const ConeParams& cone);

// Several asymptotic results only hold for n >= 5; smaller n is allowed.
bool below_recommended_dimension(const ConeParams& cone) noexcept;

enum class CaseSign { Plus, Minus, Boundary };

std::string_view to_string(CaseSign sign) noexcept;

struct GeometrySummary {
  double lambda = 0.0;
  double mu_sq = 0.0;
  CaseSign sign = CaseSign::Boundary;
  int n = 0;
};

/// Curvature factor: p(p-1)(2-r_p^2)/r_p^2 + q(q-1)(2-r_q^2)/r_q^2 - 2pq.
double lambda_factor(const ConeParams& cone);

/// Same quantity written as -(n-1)(n-2) + 2[p(p-1)/r_p^2 + q(q-1)/r_q^2].
double lambda_factor_rewritten(const ConeParams& cone);

/// Sphere part p(p-1)/r_p^2 + q(q-1)/r_q^2; it decides the plus/minus case.
double sphere_curvature_sum(const ConeParams& cone);

/// mu^2 = 1 + Lambda / ((n-1)(n-2)).
double mu_squared(const ConeParams& cone);

/// mu^2 = 2[p(p-1)/r_p^2 + q(q-1)/r_q^2] / ((n-1)(n-2)); positive unless p = q = 1.
double mu_squared_direct(const ConeParams& cone);

/// Lambda / l^2. Throws InvalidInput at or below the vertex (l <= 0).
double scalar_curvature(const ConeParams& cone, double ell);

/// Radial factor r_p^p r_q^q l^{n-1} / 2^{(n-1)/2} of the volume element.
/// The angular sphere measures are not included.
double volume_density(const ConeParams& cone, double ell);

/// k-th distinct eigenvalue k(k + dim - 1) of the Laplacian on the unit S^dim.
double sphere_eigenvalue(int dim, int k);

// Lambda as a function of a continuous p with q = n - 1 - p, n fixed.
double lambda_of_real_p(int n, double p, double r_p, double r_q);

struct LambdaExtrema {
  double p_min = 0.0;
  double q_min = 0.0;
  double lambda_min = 0.0;
  double lambda_p1 = 0.0;   // Lambda(p = 1)
  double lambda_pn2 = 0.0;  // Lambda(p = n - 2)
};

// Minimizer of Lambda(p) over real p and the two endpoint values.
LambdaExtrema lambda_extrema(int n, double r_p, double r_q);

/// Plus when p(p-1)/r_p^2 + q(q-1)/r_q^2 > 2(n-1)/(n-2), Minus when below,
/// Boundary when equal to within 1e-12 relative.
CaseSign case_sign(const ConeParams& cone);

GeometrySummary summarize(const ConeParams& cone);

}  // namespace conelap
