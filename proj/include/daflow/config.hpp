#pragma once

#include <stdexcept>

namespace daflow {

/// Tolerances and iteration caps shared by every numeric kernel
/// (quadrature, root finding, ODE integration).
struct EvalConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 100000;
  // Added to the analytic truncation point of improper integrals.
  double tail_cutoff_slack = 5.0;
  // Minimum admissible distance from a singular boundary; points closer
  // than this are rejected instead of evaluated.
  double singularity_guard = 1e-9;

  // Working precision is plain double, so tolerances below 1e-12 are
  // not honest and get rejected here.
  void validate() const {
    if (!(abs_tol >= 1e-12) || !(rel_tol >= 1e-12))
      throw std::invalid_argument("EvalConfig: tolerances must be >= 1e-12");
    if (max_subdivisions < 1)
      throw std::invalid_argument("EvalConfig: max_subdivisions must be >= 1");
    if (!(tail_cutoff_slack >= 0.0))
      throw std::invalid_argument("EvalConfig: tail_cutoff_slack must be >= 0");
    if (!(singularity_guard > 0.0))
      throw std::invalid_argument("EvalConfig: singularity_guard must be > 0");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
};

}  // namespace daflow
