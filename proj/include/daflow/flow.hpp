#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "daflow/config.hpp"
#include "daflow/errors.hpp"
#include "daflow/inverse.hpp"
#include "daflow/poly.hpp"

namespace daflow {

/// Side-by-side values of the flow coordinate y1 and the closed-form inverse
/// at one (r2, x) grid point.
struct FlowComparison {
  double y1_flow = 0.0;
  double y1_closed = 0.0;
  double discrepancy = 0.0;
};

/// Largest deviation of the conserved quantity y2 * exp(-y1) along the
/// trajectory, measured against its value at time 0. Indices are 0-based.
inline double first_integral_drift(const Trajectory& traj, int i, int j) {
  if (traj.states.empty()) throw std::invalid_argument("first_integral_drift: empty trajectory");
  const int m = static_cast<int>(traj.states.front().size());
  if (i < 0 || i >= m || j < 0 || j >= m)
    throw std::invalid_argument("first_integral_drift: component index out of range");
  const std::vector<double>& ref = traj.state_at_start();
  const double reference = ref[static_cast<std::size_t>(j)] *
                           std::exp(-ref[static_cast<std::size_t>(i)]);
  double drift = 0.0;
  for (const auto& y : traj.states) {
    const double value = y[static_cast<std::size_t>(j)] *
                         std::exp(-y[static_cast<std::size_t>(i)]);
    drift = std::max(drift, std::fabs(value - reference));
  }
  return drift;
}

/// Integrates the quadratic system from (0, r2) to x and compares y1 there
/// with the closed-form inverse evaluated at (x, r2). For |r2| below the
/// singularity guard the root-based inverse is undefined, so the flow of
/// s' = r2*e^s - s takes its place.
inline FlowComparison flow_vs_G(double r2, double x, const EvalConfig& cfg = {}) {
  cfg.validate();
  if (!std::isfinite(r2) || !std::isfinite(x))
    throw std::invalid_argument("flow_vs_G: arguments must be finite");
  if (!g_domain_contains(x, r2, cfg) && std::fabs(r2) > cfg.singularity_guard)
    throw domain_error("flow_vs_G: (x, r2) outside the inverse domain");

  const Trajectory traj = integrate(specific_system(), {0.0, r2}, x, cfg);
  if (traj.status == IntegrationStatus::blow_up)
    throw domain_error("flow_vs_G: trajectory escapes before x", traj.escape_time);
  if (traj.status == IntegrationStatus::step_failure)
    throw convergence_error("flow_vs_G: step control exhausted before x");

  FlowComparison cmp;
  cmp.y1_flow = traj.state_at_end(x)[0];
  cmp.y1_closed = (std::fabs(r2) > cfg.singularity_guard) ? eval_G_root(x, r2, cfg)
                                                          : eval_G_ode(x, r2, cfg);
  cmp.discrepancy = std::fabs(cmp.y1_flow - cmp.y1_closed);
  return cmp;
}

}  // namespace daflow
