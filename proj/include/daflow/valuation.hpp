#pragma once

#include <cstdint>
#include <stdexcept>

#include "daflow/rational.hpp"

namespace daflow {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
}

/// The exponent i in q = p^i * m/n with p dividing neither m nor n.
/// |q|_p = p^(-exponent); the zero input gets the +infinity marker.
struct PAdicValuation {
  std::uint64_t prime = 2;
  long long exponent = 0;
  bool infinite = false;  // set for q = 0

  friend bool operator==(const PAdicValuation&, const PAdicValuation&) = default;
};

inline PAdicValuation padic_valuation(const ExactRational& q, std::uint64_t p) {
  require_prime(p);
  if (q.is_zero()) return {p, 0, true};
  const Integer prime(static_cast<unsigned long>(p));
  Integer stripped;
  Integer num = q.numerator();
  Integer den = q.denominator();
  const auto vn = mpz_remove(stripped.get_mpz_t(), num.get_mpz_t(), prime.get_mpz_t());
  const auto vd = mpz_remove(stripped.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t());
  return {p, static_cast<long long>(vn) - static_cast<long long>(vd), false};
}

/// nu_p(k!) by Legendre's formula, sum of floor(k/p^j). No factorial is
/// materialized, so k in the millions is fine.
inline long long factorial_valuation(std::uint64_t k, std::uint64_t p) {
  require_prime(p);
  long long total = 0;
  while (k > 0) {
    k /= p;
    total += static_cast<long long>(k);
  }
  return total;
}

}  // namespace daflow
