#pragma once

// Numerical realization of the reduced phase system: adaptive Dormand-Prince
// 5(4) integration with PI step control, separatrix shooting, exponent
// regression and first-integral drift.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conelap/nonlinear_dynamics.hpp"

namespace conelap {

/// (y, a_bar x + b_bar y - Q x^alpha). Throws InvalidInput for x < 0.
std::array<double, 2> vector_field(const DynParams& dp, double x, double y);

enum class Termination { TimeLimit, ReachedEquilibrium, Escaped, LeftHalfPlane };

std::string_view to_string(Termination t) noexcept;

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // strictly increasing t
  double tol_used = 0.0;
  int steps_accepted = 0;
  int steps_rejected = 0;
  Termination terminated = Termination::TimeLimit;
};

enum class TimeDirection { Forward, Backward };

struct IntegrationOptions {
  double equilibrium_radius = 1e-9;
  double escape_radius = 1e6;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
  bool stop_at_equilibrium = true;
};

inline constexpr double kMinTolerance = 1e-13;
inline constexpr double kMaxTolerance = 1e-3;

// Integrates over a time span of length t_max. A Backward run follows the
// negated field and returns samples at times -t_max..0 in increasing order, so
// the last sample is the initial state.
//
// Per-step local error estimate <= tol * (1 + |state|). Throws StepUnderflowError
// when the step drops below 1e-14 * t_max.
Trajectory integrate(const DynParams& dp, std::array<double, 2> init, double t_max, double tol,
                     const IntegrationOptions& opts = {}, TimeDirection dir = TimeDirection::Forward);

enum class EigenDirection { Minus, Plus };

// Starts at eq + side * offset * (unit eigenvector) and integrates forward or
// backward. Stable manifolds are best traced backward, where the chosen
// direction dominates.
Trajectory shoot_separatrix(const DynParams& dp, const Equilibrium& eq, EigenDirection direction,
                            double offset, bool backward, double t_max, double tol,
                            const IntegrationOptions& opts = {}, int side = +1);

struct ExponentFit {
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t samples_used = 0;
  bool non_monotone = false;  // distance to the equilibrium oscillates in the window
  bool envelope = false;      // fitted through local maxima instead of raw samples
};

// Least-squares slope of ln|w(t) - w_eq| against t over [t_lo, t_hi].
// Needs at least 20 samples in the window (InvalidInput otherwise).
ExponentFit estimate_exponent(const Trajectory& traj, std::pair<double, double> window,
                              std::array<double, 2> eq_location = {0.0, 0.0});

// Time window where the distance to eq_location lies within [r_lo, r_hi].
std::optional<std::pair<double, double>> window_by_distance(const Trajectory& traj,
                                                            std::array<double, 2> eq_location,
                                                            double r_lo, double r_hi);

// max_k |I(x_k,y_k) - I(x_0,y_0)| / max(|I(x_0,y_0)|, I_scale); the default
// scale is |I(w2)| when w2 exists and the smallest normal double otherwise.
double hamiltonian_drift(const DynParams& dp, const Trajectory& traj,
                         std::optional<double> I_scale = std::nullopt);

// Times where y crosses zero from below, linearly interpolated.
std::vector<double> upcrossing_times(const Trajectory& traj);

struct PortraitSpec {
  std::pair<double, double> x_range{0.0, 1.0};
  std::pair<double, double> y_range{-1.0, 1.0};
  int nx = 8;
  int ny = 8;
  double t_max = 10.0;
  double tol = 1e-8;
};

struct PortraitSeed {
  std::size_t index = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::optional<Trajectory> trajectory;
  std::string error;  // set when the seed's integration failed
};

struct PortraitRun {
  std::vector<PortraitSeed> seeds;  // seed order: x-major over the grid
};

// One trajectory per grid seed (seeds with x < 0 are skipped). Seeds may run on
// several threads; results are identical to a serial run.
PortraitRun sample_portrait(const DynParams& dp, const PortraitSpec& spec, unsigned threads = 0);

}  // namespace conelap
