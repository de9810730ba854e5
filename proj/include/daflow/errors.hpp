#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace daflow {

struct Interval {
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool empty() const { return !(lo <= hi); }
};

/// Thrown when an evaluation point lies inside (or too close to) a region
/// where the underlying integral or inverse is undefined.
class domain_error : public std::runtime_error {
 public:
  domain_error(const std::string& msg, Interval excluded)
      : std::runtime_error(msg), excluded_(excluded) {}

  domain_error(const std::string& msg, double escape_time)
      : std::runtime_error(msg), escape_time_(escape_time) {}

  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}

  const Interval& excluded() const { return excluded_; }
  bool has_escape_time() const { return !std::isnan(escape_time_); }
  double escape_time() const { return escape_time_; }

 private:
  Interval excluded_{};
  double escape_time_ = std::numeric_limits<double>::quiet_NaN();
};

/// Thrown when an iterative kernel exhausts its budget before meeting the
/// requested tolerance. Carries the best value reached so far.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(
      const std::string& msg,
      double partial = std::numeric_limits<double>::quiet_NaN(),
      double error_estimate = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(msg), partial_(partial), error_estimate_(error_estimate) {}

  double partial() const { return partial_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

}  // namespace daflow
