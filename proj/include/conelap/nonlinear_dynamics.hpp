#pragma once

// Radial nonlinear equation L_g u = Q u^alpha on the cone, reduced with
// t = -ln(l), u = e^{2t/(alpha-1)} w(t) to the autonomous planar system
//
//   x' = y,
//   y' = a_bar x + b_bar y - Q x^alpha,
//
// with b_bar = (n-2) - 4/(alpha-1) and
//      a_bar = -4/(alpha-1)^2 + 2(n-2)/(alpha-1) + (n-2) Lambda / (4(n-1)).

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conelap/cone_geometry.hpp"
#include "conelap/spectral_linear.hpp"

namespace conelap {

struct DynParams {
  double alpha = 0.0;
  double Q = 0.0;
  int n = 0;
  // Curvature factor of the originating cone. Absent for raw (a_bar, b_bar)
  // parameter sets, e.g. rounded figure coefficients.
  std::optional<double> lambda;
  double a_bar = 0.0;
  double b_bar = 0.0;
  double s = 0.0;      // (alpha-1)(n-2)/4, in (0, 1]
  double shift = 0.0;  // 2/(alpha-1), the alpha-basic exponent with its sign flipped
};

/// alpha* = (n+2)/(n-2).
double critical_exponent(int n);

// Throws InvalidInput unless 1 < alpha <= alpha*.
DynParams dyn_params(const ConeParams& cone, double alpha, double Q);
DynParams dyn_params_from_curvature(int n, double lambda, double alpha, double Q);

// Stores the coefficients verbatim; only alpha in (1, alpha*] and n >= 3 are checked.
DynParams raw_dyn_params(double a_bar, double b_bar, double Q, double alpha, int n);

/// a_bar through s: (n-2)^2/4 [Lambda/((n-1)(n-2)) + 2/s - 1/s^2].
double a_bar_of_s(int n, double lambda, double s);

/// alpha_0 = 1 + 4/((n-2)(1+mu)): a_bar < 0 below it and > 0 above it.
double alpha_zero(const ConeParams& cone);
double alpha_zero_from_mu(int n, double mu);

/// s_0 = 1/(1+mu), the positive root of Lambda/((n-1)(n-2)) s^2 + 2s - 1.
double s_zero(double mu);

/// sigma = (n-2)(mu-1)/2, the exponent of the separatrix solution u_s ~ l^sigma.
double sigma_exponent(const ConeParams& cone);

// b_bar^2/4 + a_bar; equals (n-2)^2 mu^2 / 4 for cone-derived parameters.
double origin_discriminant(const DynParams& dp);
// b_bar^2/4 - a_bar (alpha-1), the discriminant at w2.
double w2_discriminant(const DynParams& dp);

enum class EquilibriumKind { Saddle, StableFocus, StableNode, Center, DegenerateNode, WeakSaddle };

std::string_view to_string(EquilibriumKind kind) noexcept;

struct Equilibrium {
  std::string name;  // "w1" or "w2"
  std::array<double, 2> location{0.0, 0.0};
  // eigvals[0] is the minus root, eigvals[1] the plus root.
  std::array<std::complex<double>, 2> eigvals{};
  // Companion-matrix eigenvectors (1, eigenvalue).
  std::array<std::array<std::complex<double>, 2>, 2> eigvecs{};
  EquilibriumKind kind = EquilibriumKind::Saddle;
  // Jacobian [[0, 1], [jac_a, b_bar]] of the vector field at the point.
  double jac_a = 0.0;

  bool real_eigen() const noexcept { return eigvals[0].imag() == 0.0 && eigvals[1].imag() == 0.0; }
};

// w1 = (0,0) always; w2 = ((a_bar/Q)^{1/(alpha-1)}, 0) iff a_bar/Q > 0.
// Throws NumericalFailure when w2 is too far out to represent (alpha near 1).
std::vector<Equilibrium> equilibria(const DynParams& dp);
Equilibrium origin_equilibrium(const DynParams& dp);

enum class CaseId { C1, C2, C3, C3prime, C4, C5plus, C5minus, C6plus, C6minus, C7plus, C7minus };

std::string_view to_string(CaseId id) noexcept;
std::optional<CaseId> case_id_from_string(std::string_view s) noexcept;

struct CaseLabel {
  CaseId id = CaseId::C1;
  std::string description;
};

// Tie bands: |a_bar| < 1e-9 max(1,(n-2)^2) is Case 6, |alpha - alpha*| < 1e-12 is
// Case 7, Q == 0 exactly is Case 5.
double a_bar_tolerance(int n);
inline constexpr double kAlphaCriticalTolerance = 1e-12;

CaseLabel classify_case(const DynParams& dp);

enum class Family { C_infinity, C_zero, Separatrix_s, Separatrix_incoming, Fowler };

std::string_view to_string(Family f) noexcept;

struct FamilyDescriptor {
  Family family = Family::Separatrix_s;
  std::optional<double> w_exponent;  // growth/decay rate of w in t
  std::optional<double> u_exponent;  // q with u ~ l^q
  std::optional<SobolevVerdict> verdict;
  std::string notes;
};

// Admissible (positive) solution families for the case. The cone is optional:
// without it the plus/minus split is not available and verdicts rely on the
// exponents alone.
std::vector<FamilyDescriptor> solution_families(const DynParams& dp, const CaseLabel& label,
                                                const std::optional<ConeParams>& cone = std::nullopt);

/// I(x,y) = y^2/2 - a_bar x^2/2 + Q x^{alpha+1}/(alpha+1). Only for alpha = alpha*.
double first_integral(const DynParams& dp, double x, double y);

/// I at w2: -(Q/n)(a_bar/Q)^{n/2}.
double first_integral_at_w2(const DynParams& dp);

bool is_critical(const DynParams& dp) noexcept;

struct WSample {
  double t = 0.0;
  double w = 0.0;
};

struct USample {
  double ell = 0.0;
  double u = 0.0;
};

/// u(l) = l^{-2/(alpha-1)} w(-ln l). Output is ordered by increasing l.
std::vector<USample> u_from_w(double alpha, const std::vector<WSample>& samples);

// Perturbation bounds for Q x^alpha near the origin on 0 <= x <= delta:
// |Q x^alpha| <= L |x|^{1+rho} with rho = alpha - 1, and the local Lipschitz
// constant alpha |Q| delta^{alpha-1}.
struct PerturbationBounds {
  double rho = 0.0;
  double L = 0.0;
  double lipschitz = 0.0;
  bool satisfied = false;
};

PerturbationBounds perturbation_bounds(const DynParams& dp, double delta);

// Yamabe metric near the vertex: u ~ l^sigma and g_Y = u^{4/(n-2)} g_K, so the
// conformal factor behaves like l^{4 sigma/(n-2)} = l^{2(mu-1)}.
struct YamabeMetricAsymptotic {
  double sigma = 0.0;
  double conformal_factor_exponent = 0.0;
};

YamabeMetricAsymptotic yamabe_metric_asymptotic(const ConeParams& cone);

}  // namespace conelap
