#pragma once

// Self-check suites behind `conelap verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "conelap/cone_geometry.hpp"
#include "conelap/nonlinear_dynamics.hpp"
#include "conelap/ode_engine.hpp"
#include "conelap/spectral_linear.hpp"

namespace conelap {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
};

nlohmann::json suite_json(const SuiteResult& r);

// Random cones with p, q in [1, 9], radii in [0.3, 3], alpha in (1, alpha*].
SuiteResult verify_identities(int draws, std::uint64_t seed);

// Truncated series substituted into the radial operator in 500-digit arithmetic;
// the residual must scale like l^{nu + 2M}.
SuiteResult verify_series(int instances, std::uint64_t seed, int M = kDefaultTruncation);

// Stored figures against their captioned cases.
SuiteResult verify_figures();

// Separatrix shooting plus regression against the closed-form eigenvalues.
SuiteResult verify_dynamics();

// First-integral conservation along Fowler orbits for n = 5, 6, 7.
SuiteResult verify_fowler();

struct RepresentativeCase {
  std::string name;
  CaseId expected;
  ConeParams cone;
  double alpha = 0.0;
  double Q = 0.0;
};

// One cone-derived parameter set for each of Cases 1-4.
std::vector<RepresentativeCase> representative_cases();

struct ExponentRecovery {
  double analytic = 0.0;
  ExponentFit fit;
  double relative_error = 0.0;
};

// Fast stable exponent lambda_- at w1, traced backward from w1 along v_-.
ExponentRecovery recover_stable_exponent(const DynParams& dp, double tol = 1e-10);

// Slow exponent lambda_+ at a stable node w1, integrated forward from radius r0 on v_+.
ExponentRecovery recover_slow_exponent(const DynParams& dp, double r0 = 1e-3, double tol = 1e-10);

struct FowlerRun {
  int n = 0;
  double drift = 0.0;
  int periods = 0;
  double period = 0.0;
  double I_min = 0.0;
  double I_max = 0.0;
  double I_w2 = 0.0;
};

// Orbit through (x2/2, 0) over ten detected periods.
FowlerRun fowler_orbit(const DynParams& dp, double tol = 1e-10);

}  // namespace conelap
