#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "daflow/errors.hpp"
#include "daflow/rational.hpp"
#include "daflow/valuation.hpp"

namespace daflow {

// Full-fraction materialization is capped: the numerator (k-1)! has on the
// order of k*log10(k) digits.
inline constexpr unsigned kCoefficientCap = 5000;

/// a_k = (k-1)!/k^k, the k-th power-series coefficient of the function
/// whose valuations certify the failure of the Sibuya-Sperber condition.
inline ExactRational h_coefficient(unsigned k, unsigned cap = kCoefficientCap) {
  if (k == 0) throw std::invalid_argument("h_coefficient: k must be >= 1");
  if (k > cap) throw std::invalid_argument("h_coefficient: k above materialization cap");
  Integer num;
  mpz_fac_ui(num.get_mpz_t(), k - 1);
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), k, k);
  return ExactRational(num, den);
}

/// nu_p(a_k) without materializing the fraction:
/// nu_p((k-1)!) - k*nu_p(k), both terms via Legendre / direct division.
inline long long h_coefficient_valuation(std::uint64_t k, std::uint64_t p) {
  require_prime(p);
  if (k == 0) throw std::invalid_argument("h_coefficient_valuation: k must be >= 1");
  long long vk = 0;
  for (std::uint64_t m = k; m % p == 0; m /= p) ++vk;
  return factorial_valuation(k - 1, p) - static_cast<long long>(k) * vk;
}

/// Exact prefix a_1..a_N of the series, built with a running factorial.
struct SeriesCoefficients {
  unsigned order = 0;
  std::vector<ExactRational> coefficients;  // coefficients[k-1] = a_k

  static SeriesCoefficients prefix(unsigned n, unsigned cap = kCoefficientCap) {
    if (n == 0) throw std::invalid_argument("SeriesCoefficients: order must be >= 1");
    if (n > cap) throw std::invalid_argument("SeriesCoefficients: order above cap");
    SeriesCoefficients out;
    out.order = n;
    out.coefficients.reserve(n);
    Integer factorial(1);  // (k-1)!
    for (unsigned k = 1; k <= n; ++k) {
      if (k > 1) factorial *= (k - 1);
      Integer den;
      mpz_ui_pow_ui(den.get_mpz_t(), k, k);
      out.coefficients.emplace_back(factorial, den);
    }
    return out;
  }

  const ExactRational& at(unsigned k) const {
    if (k == 0 || k > order) throw std::out_of_range("SeriesCoefficients: index");
    return coefficients[k - 1];
  }
};

struct SibuyaRow {
  unsigned j = 0;
  std::uint64_t k = 0;           // p^j
  long long valuation = 0;       // nu_p(a_k)
  long long bound_exponent = 0;  // j*p^j - (p^j-1)/(p-1); equals (j-1)*2^j + 1 at p = 2
  double log_norm_over_k = 0.0;  // ln|a_k|_p / k = -valuation * ln(p) / k
};

/// One row per j = 1..j_max along the subsequence k = p^j. The valuation
/// column is exact; the bound column is the lower bound on -nu_p(a_k)
/// obtained from nu_p((k-1)!) <= (k-1)/(p-1).
inline std::vector<SibuyaRow> sibuya_sperber_report(unsigned j_max, std::uint64_t p = 2) {
  require_prime(p);
  if (j_max < 1 || j_max > 24)
    throw std::invalid_argument("sibuya_sperber_report: j_max must be in [1, 24]");
  std::vector<SibuyaRow> rows;
  rows.reserve(j_max);
  const double log_p = std::log(static_cast<double>(p));
  std::uint64_t pw = 1;
  for (unsigned j = 1; j <= j_max; ++j) {
    if (pw > (std::uint64_t{1} << 48) / p)
      throw std::invalid_argument("sibuya_sperber_report: p^j overflows the row range");
    pw *= p;
    SibuyaRow row;
    row.j = j;
    row.k = pw;
    row.valuation = h_coefficient_valuation(pw, p);
    row.bound_exponent = static_cast<long long>(j) * static_cast<long long>(pw) -
                         static_cast<long long>((pw - 1) / (p - 1));
    row.log_norm_over_k =
        -static_cast<double>(row.valuation) * log_p / static_cast<double>(pw);
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

// Rational enclosure of ln 2, tight to 1e-39.
inline const mpq_class& ln2_lower() {
  static const mpq_class v(
      "693147180559945309417232121458176568075/"
      "1000000000000000000000000000000000000000");
  return v;
}
inline const mpq_class& ln2_upper() {
  static const mpq_class v(
      "693147180559945309417232121458176568076/"
      "1000000000000000000000000000000000000000");
  return v;
}

}  // namespace detail

/// Smallest j with ((j-1)*2^j + 1)*ln 2 > C*2^j. The comparison is done in
/// exact rational arithmetic against an enclosure of ln 2, so the scan never
/// mis-decides a row; C itself converts exactly (doubles are dyadic).
inline unsigned min_violating_j(double C) {
  if (!std::isfinite(C) || !(C > 0.0))
    throw std::invalid_argument("min_violating_j: C must be positive and finite");
  const mpq_class c_exact(C);
  for (unsigned j = 1; j <= 1000000; ++j) {
    const Integer pw = Integer(1) << j;
    const Integer bound = (Integer(j) - 1) * pw + 1;
    const mpq_class rhs = mpq_class(c_exact * pw);
    if (mpq_class(bound * detail::ln2_lower()) > rhs) return j;
    if (mpq_class(bound * detail::ln2_upper()) > rhs)
      throw convergence_error("min_violating_j: C falls inside the ln 2 enclosure");
  }
  throw convergence_error("min_violating_j: no violation below j = 10^6");
}

}  // namespace daflow
