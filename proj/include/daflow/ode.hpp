#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace daflow {

enum class IntegrationStatus { reached_target, blow_up, step_failure };

/// Sampled solution of an autonomous initial value problem started at x = 0.
/// Times are strictly increasing and always contain 0; backward runs are
/// stored reversed so the invariant holds in both directions.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  IntegrationStatus status = IntegrationStatus::reached_target;
  double escape_time = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> interval_reached{0.0, 0.0};

  const std::vector<double>& state_at_start() const {
    return times.front() == 0.0 ? states.front() : states.back();
  }
  const std::vector<double>& state_at_end(double x_target) const {
    return x_target >= 0.0 ? states.back() : states.front();
  }
};

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double blow_up_threshold = 1e8;
  int max_steps = 100000;
};

namespace detail {

// Dormand-Prince 5(4) tableau; the 4th-order weights enter only through the
// difference row e = b - b_hat.
inline constexpr double kDp5A21 = 1.0 / 5.0;
inline constexpr double kDp5A31 = 3.0 / 40.0, kDp5A32 = 9.0 / 40.0;
inline constexpr double kDp5A41 = 44.0 / 45.0, kDp5A42 = -56.0 / 15.0, kDp5A43 = 32.0 / 9.0;
inline constexpr double kDp5A51 = 19372.0 / 6561.0, kDp5A52 = -25360.0 / 2187.0,
                        kDp5A53 = 64448.0 / 6561.0, kDp5A54 = -212.0 / 729.0;
inline constexpr double kDp5A61 = 9017.0 / 3168.0, kDp5A62 = -355.0 / 33.0,
                        kDp5A63 = 46732.0 / 5247.0, kDp5A64 = 49.0 / 176.0,
                        kDp5A65 = -5103.0 / 18656.0;
inline constexpr double kDp5B1 = 35.0 / 384.0, kDp5B3 = 500.0 / 1113.0, kDp5B4 = 125.0 / 192.0,
                        kDp5B5 = -2187.0 / 6784.0, kDp5B6 = 11.0 / 84.0;
inline constexpr double kDp5E1 = 71.0 / 57600.0, kDp5E3 = -71.0 / 16695.0,
                        kDp5E4 = 71.0 / 1920.0, kDp5E5 = -17253.0 / 339200.0,
                        kDp5E6 = 22.0 / 525.0, kDp5E7 = -1.0 / 40.0;

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

/// Adaptive explicit Runge-Kutta integration of y' = rhs(y) from y(0) = y0
/// toward x_target (either sign). The RHS is called as rhs(y, dydt).
///
/// Stops early with blow_up when any component exceeds blow_up_threshold or
/// the step size collapses while the state is already large; escape_time is
/// then the last x reached. Stops with step_failure when the step budget or
/// the step size is exhausted without either of the above.
template <typename Rhs>
Trajectory integrate_ode(Rhs&& rhs, std::vector<double> y0, double x_target,
                         const OdeOptions& opt = {}) {
  const std::size_t n = y0.size();
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(y0);
  if (x_target == 0.0) return traj;

  const double dir = (x_target > 0.0) ? 1.0 : -1.0;
  std::vector<double> y = std::move(y0);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> stage(n), y_new(n);

  rhs(y, k1);
  if (!detail::all_finite(k1)) {
    traj.status = IntegrationStatus::blow_up;
    traj.escape_time = 0.0;
    return traj;
  }

  // Initial step from the usual d0/d1 heuristic, capped by the target.
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::fabs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / std::max<std::size_t>(n, 1));
    d1 = std::sqrt(d1 / std::max<std::size_t>(n, 1));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = dir * std::min(h0, std::fabs(x_target));
  }

  double x = 0.0;
  bool last_reject_nonfinite = false;
  int steps = 0;
  while (steps < opt.max_steps) {
    ++steps;
    const double remaining = x_target - x;
    if (std::fabs(h) >= std::fabs(remaining)) h = remaining;
    const double h_min = 8.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::fabs(x));
    if (std::fabs(h) < h_min) {
      // A collapsed step with a huge state or derivative is a finite-time
      // escape pinned to machine resolution, not a tolerance problem.
      const bool looks_singular = last_reject_nonfinite ||
                                  detail::max_abs(y) > 1e-3 * opt.blow_up_threshold ||
                                  detail::max_abs(k1) > opt.blow_up_threshold;
      traj.status =
          looks_singular ? IntegrationStatus::blow_up : IntegrationStatus::step_failure;
      if (looks_singular) traj.escape_time = x;
      break;
    }

    using namespace detail;
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h * kDp5A21 * k1[i];
    rhs(stage, k2);
    for (std::size_t i = 0; i < n; ++i)
      stage[i] = y[i] + h * (kDp5A31 * k1[i] + kDp5A32 * k2[i]);
    rhs(stage, k3);
    for (std::size_t i = 0; i < n; ++i)
      stage[i] = y[i] + h * (kDp5A41 * k1[i] + kDp5A42 * k2[i] + kDp5A43 * k3[i]);
    rhs(stage, k4);
    for (std::size_t i = 0; i < n; ++i)
      stage[i] = y[i] + h * (kDp5A51 * k1[i] + kDp5A52 * k2[i] + kDp5A53 * k3[i] +
                             kDp5A54 * k4[i]);
    rhs(stage, k5);
    for (std::size_t i = 0; i < n; ++i)
      stage[i] = y[i] + h * (kDp5A61 * k1[i] + kDp5A62 * k2[i] + kDp5A63 * k3[i] +
                             kDp5A64 * k4[i] + kDp5A65 * k5[i]);
    rhs(stage, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (kDp5B1 * k1[i] + kDp5B3 * k3[i] + kDp5B4 * k4[i] +
                             kDp5B5 * k5[i] + kDp5B6 * k6[i]);
    rhs(y_new, k7);

    double err = 0.0;
    bool finite = detail::all_finite(y_new) && detail::all_finite(k7);
    if (finite) {
      for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (kDp5E1 * k1[i] + kDp5E3 * k3[i] + kDp5E4 * k4[i] +
                              kDp5E5 * k5[i] + kDp5E6 * k6[i] + kDp5E7 * k7[i]);
        const double sc =
            opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / std::max<std::size_t>(n, 1));
      if (!std::isfinite(err)) finite = false;
    }
    if (!finite) {
      last_reject_nonfinite = true;
      h *= 0.5;
      continue;
    }

    if (err <= 1.0) {
      last_reject_nonfinite = false;
      x += h;
      y.swap(y_new);
      k1.swap(k7);
      traj.times.push_back(x);
      traj.states.push_back(y);
      if (detail::max_abs(y) > opt.blow_up_threshold) {
        traj.status = IntegrationStatus::blow_up;
        traj.escape_time = x;
        break;
      }
      if (x == x_target) break;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 10.0);
    h *= factor;
  }

  if (traj.status == IntegrationStatus::reached_target && x != x_target)
    traj.status = IntegrationStatus::step_failure;

  if (dir < 0.0) {
    std::reverse(traj.times.begin(), traj.times.end());
    std::reverse(traj.states.begin(), traj.states.end());
  }
  traj.interval_reached = {std::min(0.0, x), std::max(0.0, x)};
  return traj;
}

}  // namespace daflow
