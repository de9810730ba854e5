#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "daflow/config.hpp"
#include "daflow/errors.hpp"
#include "daflow/ode.hpp"
#include "daflow/roots.hpp"
#include "daflow/special.hpp"

namespace daflow {

/// Branches of the inverse domain D, split by where c sits relative to the
/// excluded interval [0, 1/e]. The guard strips around 0 and 1/e are
/// classified with their closed side; the domain predicate rejects them.
enum class GBranch { negative_c, zero_c, positive_c_small, positive_c_large };

inline GBranch g_branch(double c, const EvalConfig& cfg = {}) {
  const double guard = cfg.singularity_guard;
  if (c < -guard) return GBranch::negative_c;
  if (std::fabs(c) <= guard) return GBranch::zero_c;
  if (c <= kReciprocalE) return GBranch::positive_c_small;
  return GBranch::positive_c_large;
}

/// Membership in D up to guards: all t for 0 <= c <= 1/e, t > H(c) for c < 0,
/// t < H(c) for c > 1/e. Points within a guard of a boundary (the strip
/// c in [-guard, 0), the strip 1/e < c <= 1/e + guard, or |t - H(c)| <= guard)
/// are reported as outside.
inline bool g_domain_contains(double t, double c, const EvalConfig& cfg = {}) {
  cfg.validate();
  if (!std::isfinite(t) || !std::isfinite(c)) return false;
  const double guard = cfg.singularity_guard;
  switch (g_branch(c, cfg)) {
    case GBranch::negative_c:
      return t > eval_H(c, cfg).value + guard;
    case GBranch::zero_c:
      return c >= 0.0;
    case GBranch::positive_c_small:
      return true;
    case GBranch::positive_c_large:
      if (c <= kReciprocalE + guard) return false;
      return t < eval_H(c, cfg).value - guard;
  }
  return false;
}

namespace detail {

[[noreturn]] inline void throw_outside_inverse_domain(double c, const EvalConfig& cfg) {
  const double inf = std::numeric_limits<double>::infinity();
  if (c < 0.0) {
    const double boundary = eval_H(c, cfg).value;
    throw domain_error("eval_G: t must exceed H(c) for c < 0", Interval{-inf, boundary});
  }
  if (c > kReciprocalE) {
    const double boundary = in_domain_H(c, cfg) ? eval_H(c, cfg).value : 0.0;
    throw domain_error("eval_G: t must stay below H(c) for c > 1/e",
                       Interval{boundary, inf});
  }
  throw domain_error("eval_G: c within the singularity guard of the excluded set",
                     Interval{-cfg.singularity_guard, cfg.singularity_guard});
}

}  // namespace detail

/// G(t, c): the s with F(s, c) = t, computed by bracketing and Brent on the
/// monotone branch through s = 0. The bracket endpoints respect the poles of
/// F at s*(c) (for c < 1/e) and the horizontal asymptote H(c) (for c outside
/// [0, 1/e]).
inline double eval_G_root(double t, double c, const EvalConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(t) || !std::isfinite(c))
    throw std::invalid_argument("eval_G_root: arguments must be finite");
  const GBranch branch = g_branch(c, cfg);
  if (branch == GBranch::zero_c) {
    if (c == 0.0) return 0.0;  // F degenerates; the inverse is identically 0
    detail::throw_outside_inverse_domain(c, cfg);
  }
  if (!g_domain_contains(t, c, cfg)) detail::throw_outside_inverse_domain(c, cfg);
  if (t == 0.0) return 0.0;

  EvalConfig inner = cfg;
  inner.abs_tol = std::max(0.25 * cfg.abs_tol, 1e-12);
  auto phi = [&](double s) { return eval_F(s, c, inner).value - t; };

  double lo = 0.0, hi = 0.0;
  const char* fail = nullptr;
  if (branch == GBranch::negative_c || branch == GBranch::positive_c_small) {
    const double ss = s_star(c, cfg);
    if (t > 0.0) {
      // F blows up to +inf at the pole s*(c), which sits between 0 and the
      // sought root's far side; walk an endpoint toward it until F passes t.
      double eps = 0.5 * std::fabs(ss);
      const double eps_min = 1e-7 * std::max(1.0, std::fabs(ss));
      double probe = ss - std::copysign(eps, ss);
      while (true) {
        double v;
        try {
          v = phi(probe);
        } catch (const domain_error&) {
          // The denominator dipped under the guard before F reached t.
          fail = "eval_G_root: t too large to resolve against the pole at s*(c)";
          break;
        }
        if (v >= 0.0) break;
        eps *= 0.25;
        if (eps < eps_min) {
          fail = "eval_G_root: could not bracket near the pole at s*(c)";
          break;
        }
        probe = ss - std::copysign(eps, ss);
      }
      lo = 0.0;
      hi = probe;
    } else {
      // Away from the pole F is unbounded (logarithmically for c > 0,
      // saturating at H(c) for c < 0 where domain membership guarantees a
      // crossing); expand the endpoint geometrically.
      const double away = (branch == GBranch::negative_c) ? 1.0 : -1.0;
      double reach = away;
      int tries = 0;
      while (phi(reach) > 0.0) {
        reach *= 2.0;
        if (++tries > 40) {
          fail = "eval_G_root: bracket expansion away from the pole failed";
          break;
        }
      }
      lo = 0.0;
      hi = reach;
    }
  } else {  // positive_c_large: F is increasing on all of R with limits +-H-ish
    double reach = (t > 0.0) ? 1.0 : -1.0;
    int tries = 0;
    while ((t > 0.0) ? (phi(reach) < 0.0) : (phi(reach) > 0.0)) {
      reach *= 2.0;
      if (++tries > 40) {
        fail = "eval_G_root: bracket expansion failed";
        break;
      }
    }
    lo = 0.0;
    hi = reach;
  }
  if (fail) throw convergence_error(fail);

  return brent_root(phi, std::min(lo, hi), std::max(lo, hi), 0.5 * cfg.abs_tol, 1e-15);
}

/// G(t, c) via the flow of s' = c*e^s - s from s(0) = 0. Escape before
/// reaching t certifies (t, c) lies outside D; the escape time then
/// approximates the boundary value H(c).
inline double eval_G_ode(double t, double c, const EvalConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(t) || !std::isfinite(c))
    throw std::invalid_argument("eval_G_ode: arguments must be finite");
  if (c == 0.0 || t == 0.0) return 0.0;
  OdeOptions opt;
  opt.abs_tol = std::max(0.05 * cfg.abs_tol, 1e-13);
  opt.rel_tol = opt.abs_tol;
  opt.max_steps = cfg.max_subdivisions;
  auto rhs = [c](const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = c * std::exp(y[0]) - y[0];
  };
  const Trajectory traj = integrate_ode(rhs, {0.0}, t, opt);
  switch (traj.status) {
    case IntegrationStatus::reached_target:
      return traj.state_at_end(t)[0];
    case IntegrationStatus::blow_up:
      throw domain_error("eval_G_ode: flow escapes before reaching t, so (t, c) is outside D",
                         traj.escape_time);
    case IntegrationStatus::step_failure:
      throw convergence_error("eval_G_ode: step control exhausted before reaching t");
  }
  return 0.0;  // unreachable
}

}  // namespace daflow
