#include "conelap/ode_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "conelap/errors.hpp"

namespace conelap {

namespace {

using Vec = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // largest shrink factor
constexpr double kFacMax = 10.0;  // largest growth

double norm2(const Vec& v) { return std::hypot(v[0], v[1]); }
double norm_inf(const Vec& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

// Odd extension sign(x)|x|^alpha so trial stages may cross x = 0.
Vec field_extended(const DynParams& dp, const Vec& w, double sign) {
  const double x = w[0];
  const double px = x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), dp.alpha), x);
  return {sign * w[1], sign * (dp.a_bar * x + dp.b_bar * w[1] - dp.Q * px)};
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

double initial_step(const DynParams& dp, const Vec& y0, const Vec& f0, double sign, double tol,
                    double h_max) {
  const double scale = tol * (1.0 + norm_inf(y0));
  const double d0 = norm_inf(y0) / scale;
  const double d1 = norm_inf(f0) / scale;
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h = std::min(h, h_max);
  const Vec y1 = axpy(y0, h, {{1.0, &f0}});
  const Vec f1 = field_extended(dp, y1, sign);
  const Vec df{f1[0] - f0[0], f1[1] - f0[1]};
  const double d2 = norm_inf(df) / scale / h;
  const double dd = std::max(d1, d2);
  const double h1 = dd <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dd, 0.2);
  return std::min({100.0 * h, h1, h_max});
}

bool near_equilibrium(const std::vector<Vec>& points, const Vec& w, double radius) {
  for (const auto& p : points) {
    if (std::hypot(w[0] - p[0], w[1] - p[1]) < radius) return true;
  }
  return false;
}

}  // namespace

std::array<double, 2> vector_field(const DynParams& dp, double x, double y) {
  if (x < 0.0) throw InvalidInput("the vector field is defined on x >= 0");
  return field_extended(dp, {x, y}, 1.0);
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::ReachedEquilibrium: return "ReachedEquilibrium";
    case Termination::Escaped: return "Escaped";
    case Termination::LeftHalfPlane: return "LeftHalfPlane";
  }
  return "TimeLimit";
}

Trajectory integrate(const DynParams& dp, std::array<double, 2> init, double t_max, double tol,
                     const IntegrationOptions& opts, TimeDirection dir) {
  if (!(tol >= kMinTolerance && tol <= kMaxTolerance)) {
    throw InvalidInput("tolerance must lie in [1e-13, 1e-3]");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidInput("t_max must be positive and finite");
  if (!std::isfinite(init[0]) || !std::isfinite(init[1])) throw InvalidInput("initial state must be finite");
  if (init[0] < 0.0) throw InvalidInput("initial state must satisfy x >= 0");

  const double sign = dir == TimeDirection::Forward ? 1.0 : -1.0;
  std::vector<Vec> eq_points;
  try {
    for (const auto& eq : equilibria(dp)) eq_points.push_back(eq.location);
  } catch (const NumericalFailure&) {
    // w2 beyond double range can never be reached; watch the origin only.
    eq_points.push_back(origin_equilibrium(dp).location);
  }

  Trajectory traj;
  traj.tol_used = tol;
  traj.samples.push_back({0.0, init[0], init[1]});

  const auto finish = [&](Termination why) {
    traj.terminated = why;
    if (dir == TimeDirection::Backward) {
      std::reverse(traj.samples.begin(), traj.samples.end());
      for (auto& s : traj.samples) s.t = -s.t;
    }
    return traj;
  };

  if (opts.stop_at_equilibrium && near_equilibrium(eq_points, init, opts.equilibrium_radius)) {
    return finish(Termination::ReachedEquilibrium);
  }

  const double h_max = std::min(opts.max_step, t_max);
  const double h_min = 1e-14 * t_max;
  Vec y = init;
  Vec k1 = field_extended(dp, y, sign);
  double t = 0.0;
  double h = initial_step(dp, y, k1, sign, tol, h_max);
  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (t < t_max) {
    if (++steps > opts.max_steps) throw NumericalFailure("integration step budget exhausted");
    if (t + h > t_max) h = t_max - t;
    if (h < h_min && t + h < t_max) {
      throw StepUnderflowError("step size underflow at t = " + std::to_string(sign * t));
    }

    const Vec y2 = axpy(y, h, {{a21, &k1}});
    const Vec k2 = field_extended(dp, y2, sign);
    const Vec y3 = axpy(y, h, {{a31, &k1}, {a32, &k2}});
    const Vec k3 = field_extended(dp, y3, sign);
    const Vec y4 = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const Vec k4 = field_extended(dp, y4, sign);
    const Vec y5 = axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const Vec k5 = field_extended(dp, y5, sign);
    const Vec y6 = axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const Vec k6 = field_extended(dp, y6, sign);
    const Vec ynew = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const Vec k7 = field_extended(dp, ynew, sign);

    const Vec err_vec = axpy({0.0, 0.0}, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    const double scale = tol * (1.0 + std::max(norm_inf(y), norm_inf(ynew)));
    double err = norm_inf(err_vec) / scale;
    if (!std::isfinite(err) || !std::isfinite(ynew[0]) || !std::isfinite(ynew[1])) err = 1e10;

    const double fac11 = std::pow(std::max(err, 1e-300), kExpo1);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = std::min(h / fac, h_max);
      if (last_rejected) h_new = std::min(h_new, h);
      facold = std::max(err, 1e-4);
      last_rejected = false;
      ++traj.steps_accepted;

      const double t_new = t + h;
      if (ynew[0] < 0.0) {
        // Interpolate the crossing of x = 0 linearly and stop there.
        const double frac = y[0] / (y[0] - ynew[0]);
        if (frac > 0.0) traj.samples.push_back({t + frac * h, 0.0, y[1] + frac * (ynew[1] - y[1])});
        return finish(Termination::LeftHalfPlane);
      }
      traj.samples.push_back({t_new, ynew[0], ynew[1]});
      y = ynew;
      k1 = k7;
      t = t_new;
      h = h_new;
      if (norm2(y) > opts.escape_radius) return finish(Termination::Escaped);
      if (opts.stop_at_equilibrium && near_equilibrium(eq_points, y, opts.equilibrium_radius)) {
        return finish(Termination::ReachedEquilibrium);
      }
    } else {
      h /= std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
      ++traj.steps_rejected;
    }
  }
  return finish(Termination::TimeLimit);
}

Trajectory shoot_separatrix(const DynParams& dp, const Equilibrium& eq, EigenDirection direction,
                            double offset, bool backward, double t_max, double tol,
                            const IntegrationOptions& opts, int side) {
  if (!(offset >= 1e-8 && offset <= 1e-2)) throw InvalidInput("offset must lie in [1e-8, 1e-2]");
  if (!eq.real_eigen()) throw InvalidInput("separatrix shooting needs real eigenvalues at " + eq.name);
  if (side != 1 && side != -1) throw InvalidInput("side must be +1 or -1");
  const auto& v = eq.eigvecs[direction == EigenDirection::Minus ? 0 : 1];
  const double vx = v[0].real();
  const double vy = v[1].real();
  const double len = std::hypot(vx, vy);
  const Vec start{eq.location[0] + side * offset * vx / len, eq.location[1] + side * offset * vy / len};
  if (start[0] < 0.0) throw InvalidInput("shooting start leaves the half-plane x >= 0; flip the side");
  return integrate(dp, start, t_max, tol, opts, backward ? TimeDirection::Backward : TimeDirection::Forward);
}

ExponentFit estimate_exponent(const Trajectory& traj, std::pair<double, double> window,
                              std::array<double, 2> eq_location) {
  std::vector<double> ts;
  std::vector<double> ls;
  for (const auto& s : traj.samples) {
    if (s.t < window.first || s.t > window.second) continue;
    const double d = std::hypot(s.x - eq_location[0], s.y - eq_location[1]);
    if (!(d > 0.0)) continue;
    ts.push_back(s.t);
    ls.push_back(std::log(d));
  }
  if (ts.size() < 20) {
    throw InvalidInput("exponent fit needs at least 20 samples in the window, got " + std::to_string(ts.size()));
  }

  ExponentFit fit;
  bool up = false;
  bool down = false;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    if (ls[k] > ls[k - 1]) up = true;
    if (ls[k] < ls[k - 1]) down = true;
  }
  fit.non_monotone = up && down;

  if (fit.non_monotone) {
    std::vector<double> et;
    std::vector<double> el;
    for (std::size_t k = 1; k + 1 < ls.size(); ++k) {
      if (ls[k] >= ls[k - 1] && ls[k] >= ls[k + 1]) {
        et.push_back(ts[k]);
        el.push_back(ls[k]);
      }
    }
    if (et.size() >= 3) {
      ts = std::move(et);
      ls = std::move(el);
      fit.envelope = true;
    }
  }

  const double m = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sl += ls[k];
  }
  const double tbar = st / m;
  const double lbar = sl / m;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - tbar) * (ts[k] - tbar);
    stl += (ts[k] - tbar) * (ls[k] - lbar);
    sll += (ls[k] - lbar) * (ls[k] - lbar);
  }
  if (!(stt > 0.0)) throw InvalidInput("exponent fit window has no time spread");
  fit.rate = stl / stt;
  fit.r_squared = sll > 0.0 ? (stl * stl) / (stt * sll) : 1.0;
  fit.samples_used = ts.size();
  return fit;
}

std::optional<std::pair<double, double>> window_by_distance(const Trajectory& traj,
                                                            std::array<double, 2> eq_location,
                                                            double r_lo, double r_hi) {
  std::optional<std::pair<double, double>> out;
  for (const auto& s : traj.samples) {
    const double d = std::hypot(s.x - eq_location[0], s.y - eq_location[1]);
    if (d < r_lo || d > r_hi) continue;
    if (!out) {
      out = std::pair{s.t, s.t};
    } else {
      out->first = std::min(out->first, s.t);
      out->second = std::max(out->second, s.t);
    }
  }
  return out;
}

double hamiltonian_drift(const DynParams& dp, const Trajectory& traj, std::optional<double> I_scale) {
  if (traj.samples.empty()) return 0.0;
  double floor_scale = std::numeric_limits<double>::min();
  if (I_scale) {
    floor_scale = *I_scale;
  } else if (dp.Q > 0.0 && dp.a_bar > 0.0) {
    floor_scale = std::abs(first_integral_at_w2(dp));
  }
  const auto& s0 = traj.samples.front();
  const double I0 = first_integral(dp, s0.x, s0.y);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    worst = std::max(worst, std::abs(first_integral(dp, s.x, s.y) - I0));
  }
  return worst / std::max(std::abs(I0), floor_scale);
}

std::vector<double> upcrossing_times(const Trajectory& traj) {
  std::vector<double> out;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const auto& a = traj.samples[k - 1];
    const auto& b = traj.samples[k];
    if (a.y < 0.0 && b.y >= 0.0) {
      const double frac = -a.y / (b.y - a.y);
      out.push_back(a.t + frac * (b.t - a.t));
    }
  }
  return out;
}

PortraitRun sample_portrait(const DynParams& dp, const PortraitSpec& spec, unsigned threads) {
  if (spec.nx < 0 || spec.ny < 0) throw InvalidInput("portrait grid sizes must be >= 0");
  if (spec.x_range.first > spec.x_range.second || spec.y_range.first > spec.y_range.second) {
    throw InvalidInput("portrait ranges must be ordered (lo <= hi)");
  }
  const auto grid = [](std::pair<double, double> r, int count, int k) {
    if (count == 1) return 0.5 * (r.first + r.second);
    return r.first + (r.second - r.first) * k / (count - 1);
  };

  PortraitRun run;
  for (int ix = 0; ix < spec.nx; ++ix) {
    const double x0 = grid(spec.x_range, spec.nx, ix);
    if (x0 < 0.0) continue;
    for (int iy = 0; iy < spec.ny; ++iy) {
      auto& seed = run.seeds.emplace_back();
      seed.index = run.seeds.size() - 1;
      seed.x0 = x0;
      seed.y0 = grid(spec.y_range, spec.ny, iy);
    }
  }
  if (run.seeds.empty()) return run;

  const auto work = [&](PortraitSeed& seed) {
    try {
      seed.trajectory = integrate(dp, {seed.x0, seed.y0}, spec.t_max, spec.tol);
    } catch (const std::exception& e) {
      seed.error = e.what();
    }
  };

  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(run.seeds.size()));
  if (n_threads <= 1) {
    for (auto& seed : run.seeds) work(seed);
    return run;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n_threads; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < run.seeds.size(); i = next++) work(run.seeds[i]);
    });
  }
  for (auto& th : pool) th.join();
  return run;
}

}  // namespace conelap
