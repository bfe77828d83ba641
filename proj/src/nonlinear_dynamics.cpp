#include "conelap/nonlinear_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conelap/errors.hpp"

namespace conelap {

namespace {

void require_dimension(int n) {
  if (n < 3) throw InvalidInput("n must be >= 3, got " + std::to_string(n));
}

// Returns alpha, snapped to alpha* inside the critical band.
double checked_alpha(double alpha, int n) {
  const double crit = critical_exponent(n);
  if (!std::isfinite(alpha) || !(alpha > 1.0)) {
    throw InvalidInput("alpha must exceed 1 (the linear case alpha = 1 is handled by the spectral module)");
  }
  if (std::abs(alpha - crit) < kAlphaCriticalTolerance) return crit;
  if (alpha > crit) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpha = " << alpha << " exceeds the critical exponent (n+2)/(n-2) = " << crit;
    throw InvalidInput(msg.str());
  }
  return alpha;
}

void fill_derived(DynParams& dp) {
  dp.s = (dp.alpha - 1.0) * (dp.n - 2.0) / 4.0;
  dp.shift = 2.0 / (dp.alpha - 1.0);
}

std::pair<std::complex<double>, std::complex<double>> companion_roots(double jac_a, double b_bar) {
  // roots of r^2 - b_bar r - jac_a = 0
  const double disc = 0.25 * b_bar * b_bar + jac_a;
  const double half = 0.5 * b_bar;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return {{half - root, 0.0}, {half + root, 0.0}};
  }
  const double root = std::sqrt(-disc);
  return {{half, -root}, {half, root}};
}

Equilibrium make_equilibrium(std::string name, double x, double jac_a, double b_bar, EquilibriumKind kind) {
  Equilibrium eq;
  eq.name = std::move(name);
  eq.location = {x, 0.0};
  eq.jac_a = jac_a;
  const auto [lm, lp] = companion_roots(jac_a, b_bar);
  eq.eigvals = {lm, lp};
  eq.eigvecs = {{{std::complex<double>(1.0, 0.0), lm}, {std::complex<double>(1.0, 0.0), lp}}};
  eq.kind = kind;
  return eq;
}

EquilibriumKind kind_from_discriminant(double disc, double b_bar) {
  if (b_bar == 0.0 && disc < 0.0) return EquilibriumKind::Center;
  if (disc < 0.0) return EquilibriumKind::StableFocus;
  if (disc > 0.0) return EquilibriumKind::StableNode;
  return EquilibriumKind::DegenerateNode;
}

bool a_bar_vanishes(const DynParams& dp) { return std::abs(dp.a_bar) < a_bar_tolerance(dp.n); }

}  // namespace

double critical_exponent(int n) {
  require_dimension(n);
  return (n + 2.0) / (n - 2.0);
}

DynParams dyn_params_from_curvature(int n, double lambda, double alpha, double Q) {
  require_dimension(n);
  if (!std::isfinite(Q)) throw InvalidInput("Q must be finite");
  if (!std::isfinite(lambda)) throw InvalidInput("Lambda must be finite");
  DynParams dp;
  dp.n = n;
  dp.alpha = checked_alpha(alpha, n);
  dp.Q = Q;
  dp.lambda = lambda;
  const double am1 = dp.alpha - 1.0;
  const double nn = n;
  dp.b_bar = dp.alpha == critical_exponent(n) ? 0.0 : (nn - 2.0) - 4.0 / am1;
  dp.a_bar = -4.0 / (am1 * am1) + 2.0 * (nn - 2.0) / am1 + (nn - 2.0) * lambda / (4.0 * (nn - 1.0));
  fill_derived(dp);
  return dp;
}

DynParams dyn_params(const ConeParams& cone, double alpha, double Q) {
  validate(cone);
  return dyn_params_from_curvature(cone.n(), lambda_factor(cone), alpha, Q);
}

DynParams raw_dyn_params(double a_bar, double b_bar, double Q, double alpha, int n) {
  require_dimension(n);
  if (!std::isfinite(a_bar) || !std::isfinite(b_bar) || !std::isfinite(Q)) {
    throw InvalidInput("a_bar, b_bar and Q must be finite");
  }
  if (b_bar > 0.0) throw InvalidInput("b_bar must be <= 0 for 1 < alpha <= alpha*");
  DynParams dp;
  dp.n = n;
  dp.alpha = checked_alpha(alpha, n);
  dp.Q = Q;
  dp.a_bar = a_bar;
  dp.b_bar = b_bar;
  fill_derived(dp);
  return dp;
}

double a_bar_of_s(int n, double lambda, double s) {
  const double nn = n;
  return 0.25 * (nn - 2.0) * (nn - 2.0) * (lambda / ((nn - 1.0) * (nn - 2.0)) + 2.0 / s - 1.0 / (s * s));
}

double alpha_zero_from_mu(int n, double mu) { return 1.0 + 4.0 / ((n - 2.0) * (1.0 + mu)); }

double alpha_zero(const ConeParams& cone) {
  return alpha_zero_from_mu(cone.n(), std::sqrt(mu_squared(cone)));
}

double s_zero(double mu) { return 1.0 / (1.0 + mu); }

double sigma_exponent(const ConeParams& cone) {
  return 0.5 * (cone.n() - 2.0) * (std::sqrt(mu_squared(cone)) - 1.0);
}

double origin_discriminant(const DynParams& dp) { return 0.25 * dp.b_bar * dp.b_bar + dp.a_bar; }

double w2_discriminant(const DynParams& dp) {
  return 0.25 * dp.b_bar * dp.b_bar - dp.a_bar * (dp.alpha - 1.0);
}

std::string_view to_string(EquilibriumKind kind) noexcept {
  switch (kind) {
    case EquilibriumKind::Saddle: return "Saddle";
    case EquilibriumKind::StableFocus: return "StableFocus";
    case EquilibriumKind::StableNode: return "StableNode";
    case EquilibriumKind::Center: return "Center";
    case EquilibriumKind::DegenerateNode: return "DegenerateNode";
    case EquilibriumKind::WeakSaddle: return "WeakSaddle";
  }
  return "Saddle";
}

Equilibrium origin_equilibrium(const DynParams& dp) {
  EquilibriumKind w1_kind;
  if (a_bar_vanishes(dp)) {
    w1_kind = dp.Q < 0.0 ? EquilibriumKind::WeakSaddle : EquilibriumKind::DegenerateNode;
  } else if (dp.a_bar > 0.0) {
    w1_kind = EquilibriumKind::Saddle;
  } else {
    w1_kind = kind_from_discriminant(origin_discriminant(dp), dp.b_bar);
  }
  return make_equilibrium("w1", 0.0, dp.a_bar, dp.b_bar, w1_kind);
}

std::vector<Equilibrium> equilibria(const DynParams& dp) {
  std::vector<Equilibrium> out{origin_equilibrium(dp)};
  if (dp.Q != 0.0 && !a_bar_vanishes(dp) && dp.a_bar / dp.Q > 0.0) {
    const double x2 = std::pow(dp.a_bar / dp.Q, 1.0 / (dp.alpha - 1.0));
    if (!std::isfinite(x2)) throw NumericalFailure("w2 = (a_bar/Q)^{1/(alpha-1)} overflows double range");
    const double jac_a = dp.a_bar * (1.0 - dp.alpha);
    EquilibriumKind kind;
    if (dp.a_bar < 0.0) {
      kind = EquilibriumKind::Saddle;
    } else if (is_critical(dp)) {
      kind = EquilibriumKind::Center;
    } else {
      kind = kind_from_discriminant(w2_discriminant(dp), dp.b_bar);
    }
    out.push_back(make_equilibrium("w2", x2, jac_a, dp.b_bar, kind));
  }
  return out;
}

std::string_view to_string(CaseId id) noexcept {
  switch (id) {
    case CaseId::C1: return "C1";
    case CaseId::C2: return "C2";
    case CaseId::C3: return "C3";
    case CaseId::C3prime: return "C3prime";
    case CaseId::C4: return "C4";
    case CaseId::C5plus: return "C5plus";
    case CaseId::C5minus: return "C5minus";
    case CaseId::C6plus: return "C6plus";
    case CaseId::C6minus: return "C6minus";
    case CaseId::C7plus: return "C7plus";
    case CaseId::C7minus: return "C7minus";
  }
  return "C1";
}

std::optional<CaseId> case_id_from_string(std::string_view s) noexcept {
  for (CaseId id : {CaseId::C1, CaseId::C2, CaseId::C3, CaseId::C3prime, CaseId::C4, CaseId::C5plus,
                    CaseId::C5minus, CaseId::C6plus, CaseId::C6minus, CaseId::C7plus, CaseId::C7minus}) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

double a_bar_tolerance(int n) { return 1e-9 * std::max(1.0, (n - 2.0) * (n - 2.0)); }

bool is_critical(const DynParams& dp) noexcept {
  return std::abs(dp.alpha - (dp.n + 2.0) / (dp.n - 2.0)) < kAlphaCriticalTolerance;
}

CaseLabel classify_case(const DynParams& dp) {
  // Q == 0 is an explicit request for the linear system and wins over the bands.
  if (dp.Q == 0.0) {
    if (dp.a_bar > a_bar_tolerance(dp.n)) {
      return {CaseId::C5plus, "Q = 0, a_bar > 0: linear system, w1 is a saddle"};
    }
    return {CaseId::C5minus, "Q = 0, a_bar <= 0: linear system, w1 is a stable node"};
  }
  if (is_critical(dp)) {
    if (dp.Q > 0.0) return {CaseId::C7plus, "alpha = alpha*, Q > 0: w2 is a center inside a homoclinic loop"};
    return {CaseId::C7minus, "alpha = alpha*, Q < 0: w1 is the only equilibrium (saddle)"};
  }
  if (a_bar_vanishes(dp)) {
    if (dp.Q > 0.0) return {CaseId::C6plus, "a_bar = 0, Q > 0: w1 is a weak stable node"};
    return {CaseId::C6minus, "a_bar = 0, Q < 0: w1 is a weak saddle"};
  }
  if (dp.a_bar < 0.0) {
    if (dp.Q < 0.0) return {CaseId::C1, "a_bar < 0, Q < 0: w1 stable, w2 a saddle"};
    return {CaseId::C2, "a_bar < 0, Q > 0: w1 stable, no second equilibrium"};
  }
  if (dp.Q < 0.0) return {CaseId::C4, "a_bar > 0, Q < 0: w1 a saddle, no second equilibrium"};
  if (w2_discriminant(dp) < 0.0) {
    return {CaseId::C3, "a_bar > 0, Q > 0, b_bar^2/4 - a_bar(alpha-1) < 0: w2 a stable focus"};
  }
  return {CaseId::C3prime, "a_bar > 0, Q > 0, b_bar^2/4 - a_bar(alpha-1) >= 0: w2 a stable node"};
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::C_infinity: return "C_infinity";
    case Family::C_zero: return "C_zero";
    case Family::Separatrix_s: return "Separatrix_s";
    case Family::Separatrix_incoming: return "Separatrix_incoming";
    case Family::Fowler: return "Fowler";
  }
  return "Separatrix_s";
}

namespace {

std::string plus_minus_note(const std::optional<ConeParams>& cone) {
  if (!cone) return "";
  return std::string("; cone is in the ") + std::string(to_string(case_sign(*cone))) + " case";
}

FamilyDescriptor separatrix_s(const DynParams& dp, const Equilibrium& w1,
                              const std::optional<ConeParams>& cone) {
  FamilyDescriptor f;
  f.family = Family::Separatrix_s;
  const double lm = w1.eigvals[0].real();
  f.w_exponent = lm;
  f.u_exponent = -dp.shift - lm;
  f.verdict = sobolev_verdict(*f.u_exponent, dp.n);
  f.notes = "fast solution along v_-; q + n/2 = 1 + (n-2)mu/2, always in H1, in H2 iff plus case";
  if (!w1.real_eigen()) f.notes += "; origin is a focus, exponent is the real part";
  if (dp.lambda) {
    f.notes += "; u_s ~ l^{+sigma} with sigma = (n-2)(mu-1)/2 (the opposite sign l^{-sigma} is not reproduced)";
  }
  f.notes += plus_minus_note(cone);
  return f;
}

FamilyDescriptor c_zero(const DynParams& dp, const Equilibrium& w1, const std::optional<ConeParams>& cone,
                        bool slow) {
  FamilyDescriptor f;
  f.family = Family::C_zero;
  const double lp = w1.eigvals[1].real();
  f.w_exponent = lp;
  f.u_exponent = -dp.shift - lp;
  f.verdict = sobolev_verdict(*f.u_exponent, dp.n);
  f.notes = "generic solutions tending to w1 along v_+; q + n/2 = 1 - (n-2)mu/2, never in H1, in L2 iff minus case";
  if (slow) f.notes += "; lambda_+ = 0, approach is sub-exponential and the exponent is the leading power only";
  f.notes += plus_minus_note(cone);
  return f;
}

FamilyDescriptor c_infinity(const DynParams& dp, const Equilibrium& w1, bool linear,
                            const std::optional<ConeParams>& cone) {
  FamilyDescriptor f;
  f.family = Family::C_infinity;
  const double l2_threshold = (dp.n + 4.0) / dp.n;
  if (linear) {
    const double lp = w1.eigvals[1].real();
    f.w_exponent = lp;
    f.u_exponent = -dp.shift - lp;
    f.verdict = sobolev_verdict(*f.u_exponent, dp.n);
    f.notes = "linear system: w ~ e^{lambda_+ t}, faster than alpha-basic; never in H1, in L2 iff minus case";
    return f;
  }
  f.notes = "unbounded, u grows faster than the alpha-basic function l^{-2/(alpha-1)}; never in H1";
  const bool plus_negative = dp.a_bar < 0.0 && cone && case_sign(*cone) == CaseSign::Plus;
  if (dp.alpha <= l2_threshold || plus_negative) {
    SobolevVerdict v = sobolev_verdict(-dp.shift, dp.n);
    v.in_L2 = v.in_H1 = v.in_H2 = false;
    v.max_order = -1;
    f.verdict = v;
    f.notes += dp.alpha <= l2_threshold ? "; alpha <= (n+4)/n so even the alpha-basic lower bound is not in L2"
                                        : "; a_bar < 0 on a plus-case cone: not in L2";
  } else {
    f.notes += "; L2 membership undecided since alpha > (n+4)/n";
  }
  return f;
}

FamilyDescriptor fowler(const DynParams& dp) {
  FamilyDescriptor f;
  f.family = Family::Fowler;
  f.u_exponent = -dp.shift;
  f.verdict = sobolev_verdict(-dp.shift, dp.n);
  if (is_critical(dp)) {
    f.notes = "periodic orbits around w2: x_min l^{-(n-2)/2} <= u <= x_max l^{-(n-2)/2}";
  } else {
    f.notes = "w -> w2, u ~ l^{-2/(alpha-1)}";
  }
  f.notes += "; never in H1, in L2 iff alpha > (n+4)/n";
  return f;
}

FamilyDescriptor separatrix_incoming(const DynParams& dp) {
  FamilyDescriptor f;
  f.family = Family::Separatrix_incoming;
  f.u_exponent = -dp.shift;
  f.verdict = sobolev_verdict(-dp.shift, dp.n);
  f.notes = "two incoming separatrices of the saddle w2; u is exactly alpha-basic";
  return f;
}

}  // namespace

std::vector<FamilyDescriptor> solution_families(const DynParams& dp, const CaseLabel& label,
                                                const std::optional<ConeParams>& cone) {
  const Equilibrium w1 = origin_equilibrium(dp);
  std::vector<FamilyDescriptor> out;
  switch (label.id) {
    case CaseId::C1:
      out = {c_infinity(dp, w1, false, cone), c_zero(dp, w1, cone, false), separatrix_incoming(dp),
             separatrix_s(dp, w1, cone)};
      break;
    case CaseId::C2:
    case CaseId::C5minus:
      out = {c_zero(dp, w1, cone, false), separatrix_s(dp, w1, cone)};
      break;
    case CaseId::C6plus:
      out = {c_zero(dp, w1, cone, true), separatrix_s(dp, w1, cone)};
      break;
    case CaseId::C3:
    case CaseId::C3prime:
    case CaseId::C7plus:
      out = {fowler(dp), separatrix_s(dp, w1, cone)};
      break;
    case CaseId::C4:
    case CaseId::C6minus:
    case CaseId::C7minus:
      out = {c_infinity(dp, w1, false, cone), separatrix_s(dp, w1, cone)};
      break;
    case CaseId::C5plus:
      out = {c_infinity(dp, w1, true, cone), separatrix_s(dp, w1, cone)};
      break;
  }
  return out;
}

double first_integral(const DynParams& dp, double x, double y) {
  if (!is_critical(dp)) throw InvalidInput("the first integral exists only for alpha = alpha*");
  if (x < 0.0) throw InvalidInput("first integral is defined on x >= 0");
  const double ap1 = dp.alpha + 1.0;
  return 0.5 * y * y - 0.5 * dp.a_bar * x * x + dp.Q / ap1 * std::pow(x, ap1);
}

double first_integral_at_w2(const DynParams& dp) {
  if (!is_critical(dp)) throw InvalidInput("the first integral exists only for alpha = alpha*");
  if (!(dp.Q > 0.0) || !(dp.a_bar > 0.0)) throw InvalidInput("w2 requires a_bar / Q > 0");
  return -(dp.Q / dp.n) * std::pow(dp.a_bar / dp.Q, 0.5 * dp.n);
}

std::vector<USample> u_from_w(double alpha, const std::vector<WSample>& samples) {
  if (!(alpha > 1.0)) throw InvalidInput("u_from_w requires alpha > 1");
  const double shift = 2.0 / (alpha - 1.0);
  std::vector<USample> out;
  out.reserve(samples.size());
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    const double ell = std::exp(-it->t);
    out.push_back(USample{ell, std::exp(shift * it->t) * it->w});
  }
  return out;
}

PerturbationBounds perturbation_bounds(const DynParams& dp, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  PerturbationBounds b;
  b.rho = dp.alpha - 1.0;
  b.L = std::abs(dp.Q);
  b.lipschitz = dp.alpha * std::abs(dp.Q) * std::pow(delta, dp.alpha - 1.0);
  b.satisfied = b.rho > 0.0 && std::isfinite(b.lipschitz);
  return b;
}

YamabeMetricAsymptotic yamabe_metric_asymptotic(const ConeParams& cone) {
  YamabeMetricAsymptotic y;
  y.sigma = sigma_exponent(cone);
  y.conformal_factor_exponent = 4.0 * y.sigma / (cone.n() - 2.0);
  return y;
}

}  // namespace conelap
