#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace daflow {

using Integer = mpz_class;

/// Arbitrary-precision reduced fraction. Always canonical: gcd of numerator
/// and denominator is 1, denominator is positive, zero is 0/1.
class ExactRational {
 public:
  ExactRational() : value_(0) {}
  ExactRational(long n) : value_(n) {}  // NOLINT: implicit by intent
  ExactRational(const Integer& numerator, const Integer& denominator)
      : value_(numerator, denominator) {
    if (denominator == 0) throw std::invalid_argument("ExactRational: zero denominator");
    value_.canonicalize();
  }
  explicit ExactRational(mpq_class q) : value_(std::move(q)) { value_.canonicalize(); }

  const Integer& numerator() const { return value_.get_num(); }
  const Integer& denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return value_ == 0; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }
  std::string str() const { return value_.get_str(); }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ + b.value_));
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ - b.value_));
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ * b.value_));
  }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.is_zero()) throw std::invalid_argument("ExactRational: division by zero");
    return ExactRational(mpq_class(a.value_ / b.value_));
  }
  friend ExactRational operator-(const ExactRational& a) {
    return ExactRational(mpq_class(-a.value_));
  }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const ExactRational& a, const ExactRational& b) { return !(a == b); }
  friend bool operator<(const ExactRational& a, const ExactRational& b) {
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExactRational& a, const ExactRational& b) {
    return a.value_ <= b.value_;
  }
  friend bool operator>(const ExactRational& a, const ExactRational& b) { return b < a; }
  friend bool operator>=(const ExactRational& a, const ExactRational& b) { return b <= a; }

 private:
  mpq_class value_;  // kept canonical by every constructor and operator
};

}  // namespace daflow
