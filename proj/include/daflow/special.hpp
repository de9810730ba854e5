#pragma once

#include <cmath>
#include <limits>

#include "daflow/config.hpp"
#include "daflow/errors.hpp"
#include "daflow/quadrature.hpp"
#include "daflow/rational.hpp"
#include "daflow/roots.hpp"
#include "daflow/series.hpp"

namespace daflow {

inline const double kReciprocalE = std::exp(-1.0);

namespace detail {

// Minimum of the integrand denominator c*e^u - u over [lo, hi]. For c > 0
// the denominator is convex with critical point -ln c; for c <= 0 it is
// strictly decreasing, so endpoint values suffice.
inline double denominator_min(double c, double lo, double hi) {
  const double at_lo = c * std::exp(lo) - lo;
  const double at_hi = c * std::exp(hi) - hi;
  double m = std::min(at_lo, at_hi);
  if (c > 0.0) {
    const double crit = -std::log(c);
    if (crit > lo && crit < hi) m = std::min(m, 1.0 + std::log(c));
  }
  return m;
}

}  // namespace detail

/// The c-interval J(s) on which the denominator c*e^u - u vanishes somewhere
/// between 0 and s.
inline Interval forbidden_interval(double s) {
  if (s < 0.0) return {s * std::exp(-s), 0.0};
  if (s < 1.0) return {0.0, s * std::exp(-s)};
  return {0.0, kReciprocalE};
}

/// Real domain of H: everything outside [0, 1/e], widened by the guard.
inline bool in_domain_H(double c, const EvalConfig& cfg = {}) {
  return c < -cfg.singularity_guard || c > kReciprocalE + cfg.singularity_guard;
}

/// True when c stays clear of J(s), measured by the denominator minimum over
/// the integration range rather than by interval distance.
inline bool in_domain_F(double s, double c, const EvalConfig& cfg = {}) {
  const double guard = cfg.singularity_guard;
  if (std::fabs(c) <= guard) return false;  // J(s) always contains 0
  const double lo = std::min(s, 0.0);
  const double hi = std::max(s, 0.0);
  if (c > 0.0) return detail::denominator_min(c, lo, hi) >= guard;
  // c < 0: the denominator must stay negative over the whole range; it is
  // decreasing, so its value at the left endpoint decides.
  return c * std::exp(lo) - lo <= -guard;
}

/// H(c) = integral over [0, inf) of du/(c*e^u - u). The improper upper limit
/// is truncated at a cutoff U with a closed-form tail bound:
/// c > 1/e needs c*e^U >= 2U so the tail is below 2*exp(-U)/c; for c < 0 the
/// tail is below exp(-U)/|c|.
inline QuadratureResult eval_H(double c, const EvalConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(c)) throw std::invalid_argument("eval_H: c must be finite");
  if (!in_domain_H(c, cfg))
    throw domain_error("eval_H: c inside the excluded interval [0, 1/e]",
                       Interval{0.0, kReciprocalE});
  const double quad_tol = 0.5 * cfg.abs_tol;
  double cutoff;
  double tail_bound;
  if (c > 0.0) {
    cutoff = std::max(1.0, std::log(4.0 / (c * cfg.abs_tol)));
    while (c * std::exp(cutoff) < 2.0 * cutoff) cutoff += 1.0;
    cutoff += cfg.tail_cutoff_slack;
    tail_bound = 2.0 * std::exp(-cutoff) / c;
  } else {
    cutoff = std::max(1.0, std::log(2.0 / (-c * cfg.abs_tol))) + cfg.tail_cutoff_slack;
    tail_bound = std::exp(-cutoff) / (-c);
  }
  auto integrand = [c](double u) { return 1.0 / (c * std::exp(u) - u); };
  QuadratureResult r =
      integrate_adaptive(integrand, 0.0, cutoff, quad_tol, cfg.max_subdivisions);
  r.error_estimate += tail_bound;
  return r;
}

/// F(s, c) = integral over [0, s] (signed when s < 0) of du/(c*e^u - u).
inline QuadratureResult eval_F(double s, double c, const EvalConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(s) || !std::isfinite(c))
    throw std::invalid_argument("eval_F: arguments must be finite");
  if (!in_domain_F(s, c, cfg))
    throw domain_error("eval_F: c inside (or within guard of) the singular interval J(s)",
                       forbidden_interval(s));
  if (s == 0.0) return {0.0, 0.0, 0};
  auto integrand = [c](double u) { return 1.0 / (c * std::exp(u) - u); };
  if (s > 0.0) return integrate_adaptive(integrand, 0.0, s, cfg.abs_tol, cfg.max_subdivisions);
  QuadratureResult r =
      integrate_adaptive(integrand, s, 0.0, cfg.abs_tol, cfg.max_subdivisions);
  r.value = -r.value;
  return r;
}

/// The solution of s*exp(-s) = c on the branch s < 1 where the left side is
/// increasing (the smaller of the two roots when 0 < c < 1/e).
inline double s_star(double c, const EvalConfig& cfg) {
  cfg.validate();
  const double guard = cfg.singularity_guard;
  if (!std::isfinite(c) || c > kReciprocalE - guard)
    throw domain_error("s_star: c must be at most 1/e - guard",
                       Interval{kReciprocalE - guard, std::numeric_limits<double>::infinity()});
  if (std::fabs(c) <= guard)
    throw domain_error("s_star: c must be nonzero beyond the guard", Interval{-guard, guard});
  const double lo = (c < 0.0) ? c : 0.0;
  const double hi = (c < 0.0) ? 0.0 : 1.0;
  auto fn = [c](double s) { return s * std::exp(-s) - c; };
  return brent_root(fn, lo, hi, cfg.abs_tol, 1e-15);
}

namespace detail {

// Exact coefficients get expensive (k^k dominates) past a few hundred terms;
// beyond this index the term recurrence a_{k+1} = a_k (k/(k+1))^{k+1} in long
// double is indistinguishable at double precision.
inline constexpr unsigned kSeriesExactCrossover = 400;

}  // namespace detail

/// Truncated power series sum_{k=1}^{N} a_k z^k with N picked so the Stirling
/// tail bound sqrt(2*pi/k) e^{-k} |z|^k / (1 - |z|/e) falls below abs_tol.
inline double eval_h_series(double z, const EvalConfig& cfg) {
  cfg.validate();
  const double radius = std::exp(1.0);
  if (!(std::fabs(z) <= radius - 0.01))
    throw domain_error("eval_h_series: |z| too close to the radius of convergence e");
  if (z == 0.0) return 0.0;
  const double az = std::fabs(z);
  const double log_damp = std::log(1.0 - az / radius);
  const double log_tol = std::log(cfg.abs_tol);
  unsigned n = 1;
  while (0.5 * std::log(2.0 * M_PI / n) - n + n * std::log(az) + 1.0 / (12.0 * n) -
             log_damp >=
         log_tol) {
    if (++n > 20000)
      throw convergence_error("eval_h_series: truncation index scan did not settle");
  }

  double sum = 0.0;
  long double term_z = 1.0L;
  long double coeff = 1.0L;  // tracks a_k past the exact crossover
  const unsigned exact_terms = std::min(n, detail::kSeriesExactCrossover);
  Integer factorial(1);
  for (unsigned k = 1; k <= exact_terms; ++k) {
    if (k > 1) factorial *= (k - 1);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), k, k);
    const ExactRational a(factorial, den);
    term_z *= z;
    coeff = static_cast<long double>(a.to_double());
    sum += static_cast<double>(coeff * term_z);
  }
  for (unsigned k = exact_terms; k < n; ++k) {
    coeff *= std::pow(static_cast<long double>(k) / (k + 1), static_cast<long double>(k + 1));
    term_z *= z;
    sum += static_cast<double>(coeff * term_z);
  }
  return sum;
}

}  // namespace daflow
