#pragma once

// Fourier-mode analysis of the linear equation L_g u = Q1 u on the cone.
// Each mode (i, j) of S^p x S^q reduces to the radial equation
//
//   u'' + (n-1)/l u' + (Q1 - K_ij / l^2) u = 0,
//
// whose regular solution is a Frobenius series l^nu * sum a_{2m} l^{2m}.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "conelap/cone_geometry.hpp"
#include "conelap/errors.hpp"

namespace conelap {

struct SpectralMode {
  int i = 0;
  int j = 0;
  double lambda_p = 0.0;  // distinct eigenvalue i of S^p
  double lambda_q = 0.0;  // distinct eigenvalue j of S^q
  double K = 0.0;
  double nu_plus = 0.0;
  double nu_minus = 0.0;
};

struct IndicialRoots {
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

/// K_ij = (n-2) Lambda / (4(n-1)) + 2 lambda_i^p / r_p^2 + 2 lambda_j^q / r_q^2.
double coupling_constant(const ConeParams& cone, int i, int j);

/// The same constant written through mu: 2 lambda_i/r_p^2 + 2 lambda_j/r_q^2 + (n-2)^2 (mu^2-1)/4.
double coupling_constant_mu_form(const ConeParams& cone, int i, int j);

/// Roots of nu^2 + (n-2) nu - K = 0. Throws DegenerateRootError when the
/// discriminant ((n-2)/2)^2 + K falls below 1e-14.
IndicialRoots indicial_exponents(const ConeParams& cone, int i, int j);

/// n/2 + nu^{e,pm} = 1 pm (n-2)/2 sqrt(mu^2 + 8/(n-2)^2 (lambda_i/r_p^2 + lambda_j/r_q^2)).
/// Returns the square-root factor (n-2)/2 * sqrt(...).
double indicial_spread(const ConeParams& cone, int i, int j);

SpectralMode spectral_mode(const ConeParams& cone, int i, int j);

inline constexpr int kDefaultTruncation = 25;

// Even coefficients a_0, a_2, ..., a_{2M} of the nu^{e+} series. Odd ones vanish.
template <class Real>
struct BasicSeriesSolution {
  Real nu{};
  Real Q1{};
  int n = 0;
  int truncation_M = 0;
  std::vector<Real> coeffs;
};

using SeriesSolution = BasicSeriesSolution<double>;

// Runs the recursion (m+2)(2nu+m+n) a_{m+2} = -Q1 a_m for m = 0, 2, ..., 2M-2.
// The simplified denominator is valid only when nu is an exact indicial root.
// Real may be any floating type with std-style arithmetic (double, long double,
// or a multiprecision number).
template <class Real>
BasicSeriesSolution<Real> series_coefficients(Real nu, int n, Real Q1, Real a0,
                                              int M = kDefaultTruncation) {
  if (M < 0) throw InvalidInput("truncation M must be >= 0");
  if (n < 3) throw InvalidInput("n must be >= 3");
  BasicSeriesSolution<Real> sol;
  sol.nu = nu;
  sol.Q1 = Q1;
  sol.n = n;
  sol.truncation_M = M;
  sol.coeffs.reserve(static_cast<std::size_t>(M) + 1);
  sol.coeffs.push_back(a0);
  for (int m = 0; m + 2 <= 2 * M; m += 2) {
    const Real denom = Real(m + 2) * (Real(2) * nu + Real(m) + Real(n));
    using std::abs;
    if (abs(denom) < Real(1e-13)) {
      throw SingularDenominatorError("series denominator vanishes at m = " + std::to_string(m));
    }
    sol.coeffs.push_back(-Q1 * sol.coeffs.back() / denom);
  }
  return sol;
}

// l^nu * sum_m a_{2m} l^{2m}, summed with Horner in l^2. Requires |Q1| l^2 <= 4.
template <class Real>
Real eval_series(const BasicSeriesSolution<Real>& sol, Real ell) {
  using std::abs;
  using std::pow;
  if (!(ell > Real(0))) throw InvalidInput("eval_series requires ell > 0");
  if (abs(sol.Q1) * ell * ell > Real(4)) {
    throw InvalidInput("eval_series outside the convergence-safe range |Q1| l^2 <= 4");
  }
  const Real ell2 = ell * ell;
  Real acc(0);
  for (auto it = sol.coeffs.rbegin(); it != sol.coeffs.rend(); ++it) acc = acc * ell2 + *it;
  return pow(ell, sol.nu) * acc;
}

// Convenience: nu^{e+} series for mode (i, j) of a cone.
SeriesSolution mode_series(const ConeParams& cone, int i, int j, double Q1, double a0 = 1.0,
                           int M = kDefaultTruncation);

struct SobolevVerdict {
  double exponent_q = 0.0;
  int max_order = -1;  // largest k >= 0 with k < q + n/2, or -1 when not even L2
  bool in_L2 = false;
  bool in_H1 = false;
  bool in_H2 = false;
};

/// A function behaving like l^q at the vertex lies in H^k_2 iff k < q + n/2.
SobolevVerdict sobolev_verdict(double exponent_q, int n);

struct ModeMembership {
  SobolevVerdict plus_branch;
  SobolevVerdict minus_branch;
};

ModeMembership mode_membership_report(const ConeParams& cone, int i, int j);

struct NegativeMode {
  int i = 0;
  int j = 0;
  double K = 0.0;
};

struct NegativeModeScan {
  std::vector<NegativeMode> modes;  // lexicographic in (i, j)
  // True when the scan saw a positive K inside the window in every direction,
  // so no mode outside the window can have K <= 0.
  bool window_closed = false;
};

// Modes with K_ij <= 0 inside [0, i_max] x [0, j_max]. Uses monotonicity of K
// in both indices to stop early.
NegativeModeScan negative_modes(const ConeParams& cone, int i_max, int j_max);

enum class Positivity { PositiveDefinite, ConditionallyPositive, Indefinite, Unknown };

std::string_view to_string(Positivity p) noexcept;

// integral_R_positive is the sign of the total scalar curvature over M, which
// depends on the smooth part M_0 and has to be supplied by the caller.
Positivity positivity_report(const ConeParams& cone, bool integral_R_positive);

}  // namespace conelap
