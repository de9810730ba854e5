#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "daflow/config.hpp"
#include "daflow/ode.hpp"

namespace daflow {

/// Exponent vector of one monomial; entry i is the power of y_i.
using MultiIndex = std::vector<unsigned>;

/// A system y_k' = P_k(y_1, ..., y_m) with polynomial right sides of total
/// degree at most the bound. Coefficients are sparse: absent means zero, and
/// storing zero erases the entry, so representations are canonical.
class PolySystem {
 public:
  PolySystem(int dimension, int degree_bound)
      : dimension_(dimension), degree_bound_(degree_bound), equations_() {
    if (dimension < 1) throw std::invalid_argument("PolySystem: dimension must be >= 1");
    if (degree_bound < 0) throw std::invalid_argument("PolySystem: degree bound must be >= 0");
    equations_.resize(static_cast<std::size_t>(dimension));
  }

  int dimension() const { return dimension_; }
  int degree_bound() const { return degree_bound_; }

  void set_coefficient(int equation, MultiIndex exponents, double value) {
    check_equation(equation);
    check_exponents(exponents);
    if (!std::isfinite(value))
      throw std::invalid_argument("PolySystem: coefficient must be finite");
    auto& terms = equations_[static_cast<std::size_t>(equation)];
    if (value == 0.0)
      terms.erase(exponents);
    else
      terms.insert_or_assign(std::move(exponents), value);
  }

  double coefficient(int equation, const MultiIndex& exponents) const {
    check_equation(equation);
    check_exponents(exponents);
    const auto& terms = equations_[static_cast<std::size_t>(equation)];
    const auto it = terms.find(exponents);
    return it == terms.end() ? 0.0 : it->second;
  }

  const std::map<MultiIndex, double>& terms(int equation) const {
    check_equation(equation);
    return equations_[static_cast<std::size_t>(equation)];
  }

  /// Evaluates all right sides at y into out (resized to the dimension).
  void eval_into(const std::vector<double>& y, std::vector<double>& out) const {
    if (y.size() != static_cast<std::size_t>(dimension_))
      throw std::invalid_argument("PolySystem: state dimension mismatch");
    out.assign(static_cast<std::size_t>(dimension_), 0.0);
    for (std::size_t k = 0; k < equations_.size(); ++k) {
      double acc = 0.0;
      for (const auto& [alpha, coeff] : equations_[k]) {
        double mono = coeff;
        for (std::size_t i = 0; i < alpha.size(); ++i)
          for (unsigned p = 0; p < alpha[i]; ++p) mono *= y[i];
        acc += mono;
      }
      out[k] = acc;
    }
  }

 private:
  void check_equation(int equation) const {
    if (equation < 0 || equation >= dimension_)
      throw std::invalid_argument("PolySystem: equation index out of range");
  }
  void check_exponents(const MultiIndex& exponents) const {
    if (exponents.size() != static_cast<std::size_t>(dimension_))
      throw std::invalid_argument("PolySystem: exponent vector has wrong length");
    const unsigned total = std::accumulate(exponents.begin(), exponents.end(), 0u);
    if (total > static_cast<unsigned>(degree_bound_))
      throw std::invalid_argument("PolySystem: monomial exceeds the degree bound");
  }

  int dimension_;
  int degree_bound_;
  std::vector<std::map<MultiIndex, double>> equations_;
};

inline std::vector<double> eval_rhs(const PolySystem& system, const std::vector<double>& y) {
  std::vector<double> out;
  system.eval_into(y, out);
  return out;
}

/// The planar quadratic system y1' = y2 - y1, y2' = y2^2 - y1*y2 whose first
/// component, started from (0, r), recovers the inverse function G(., r).
inline PolySystem specific_system() {
  PolySystem p(2, 2);
  p.set_coefficient(0, {0, 1}, 1.0);
  p.set_coefficient(0, {1, 0}, -1.0);
  p.set_coefficient(1, {0, 2}, 1.0);
  p.set_coefficient(1, {1, 1}, -1.0);
  return p;
}

/// The same quadratic structure embedded in dimension m with the driving pair
/// placed at coordinates (i, m-1), 0-based, i <= m-2. All other equations are
/// identically zero.
inline PolySystem embedded_system(int m, int i) {
  if (m < 2) throw std::invalid_argument("embedded_system: dimension must be >= 2");
  if (i < 0 || i > m - 2)
    throw std::invalid_argument("embedded_system: coordinate index out of range");
  PolySystem p(m, 2);
  const std::size_t mi = static_cast<std::size_t>(i);
  const std::size_t last = static_cast<std::size_t>(m - 1);
  MultiIndex e_last(static_cast<std::size_t>(m), 0u);
  e_last[last] = 1;
  MultiIndex e_i(static_cast<std::size_t>(m), 0u);
  e_i[mi] = 1;
  MultiIndex e_last2(static_cast<std::size_t>(m), 0u);
  e_last2[last] = 2;
  MultiIndex e_mixed(static_cast<std::size_t>(m), 0u);
  e_mixed[mi] = 1;
  e_mixed[last] = 1;
  p.set_coefficient(i, e_last, 1.0);
  p.set_coefficient(i, e_i, -1.0);
  p.set_coefficient(m - 1, e_last2, 1.0);
  p.set_coefficient(m - 1, e_mixed, -1.0);
  return p;
}

struct RngSeed {
  std::uint64_t value = 0;
};

namespace detail {

inline void enumerate_multi_indices(int m, int degree_bound,
                                    std::vector<MultiIndex>& out) {
  MultiIndex current(static_cast<std::size_t>(m), 0u);
  // Lexicographic recursion over positions; budget is the remaining degree.
  auto rec = [&](auto&& self, std::size_t pos, unsigned budget) -> void {
    if (pos == current.size()) {
      out.push_back(current);
      return;
    }
    for (unsigned e = 0; e <= budget; ++e) {
      current[pos] = e;
      self(self, pos + 1, budget - e);
    }
    current[pos] = 0;
  };
  rec(rec, 0, static_cast<unsigned>(degree_bound));
}

// Deterministic uniform double in [-1, 1) from the top 53 bits; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline double signed_uniform(std::mt19937_64& gen) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace detail

/// Draws every coefficient of every monomial of total degree <= d uniformly
/// from [-scale, scale), seeded deterministically. Monomials are visited in
/// lexicographic exponent order, equations in index order, so equal seeds
/// give identical systems on every platform.
inline PolySystem sample_system(int m, int d, RngSeed seed, double scale) {
  if (m < 1) throw std::invalid_argument("sample_system: dimension must be >= 1");
  if (d < 0) throw std::invalid_argument("sample_system: degree must be >= 0");
  if (!(scale >= 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("sample_system: scale must be finite and >= 0");
  PolySystem p(m, d);
  std::vector<MultiIndex> alphas;
  detail::enumerate_multi_indices(m, d, alphas);
  std::mt19937_64 gen(seed.value);
  for (int k = 0; k < m; ++k)
    for (const MultiIndex& alpha : alphas)
      p.set_coefficient(k, alpha, scale * detail::signed_uniform(gen));
  return p;
}

/// Integrates y' = P(y) from y(0) = r toward x_target under the shared
/// tolerance configuration. Blow-up detection and escape-time reporting come
/// from the integrator.
inline Trajectory integrate(const PolySystem& system, std::vector<double> r,
                            double x_target, const EvalConfig& cfg = {}) {
  cfg.validate();
  if (r.size() != static_cast<std::size_t>(system.dimension()))
    throw std::invalid_argument("integrate: initial condition dimension mismatch");
  OdeOptions opt;
  opt.abs_tol = cfg.abs_tol;
  opt.rel_tol = cfg.rel_tol;
  opt.max_steps = cfg.max_subdivisions;
  auto rhs = [&system](const std::vector<double>& y, std::vector<double>& dy) {
    system.eval_into(y, dy);
  };
  return integrate_ode(rhs, std::move(r), x_target, opt);
}

/// Result of probing the maximal existence interval around 0 by integrating
/// both directions until the horizon or an escape.
struct IntervalProbe {
  Trajectory forward;
  Trajectory backward;
  std::pair<double, double> interval_estimate{0.0, 0.0};
};

inline IntervalProbe probe_interval(const PolySystem& system, const std::vector<double>& r,
                                    double horizon, const EvalConfig& cfg = {}) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("probe_interval: horizon must be positive and finite");
  IntervalProbe probe;
  probe.forward = integrate(system, r, horizon, cfg);
  probe.backward = integrate(system, r, -horizon, cfg);
  probe.interval_estimate = {probe.backward.times.front(), probe.forward.times.back()};
  return probe;
}

}  // namespace daflow
