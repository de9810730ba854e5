#include "catch2/catch_amalgamated.hpp"

#include <bit>
#include <cstdint>
#include <random>

#include "daflow/rational.hpp"
#include "daflow/series.hpp"
#include "daflow/valuation.hpp"

using daflow::ExactRational;
using daflow::Integer;
using daflow::PAdicValuation;

namespace {

// Independent factor counter: plain repeated division on a materialized
// integer, no Legendre shortcut and no mpz_remove.
long long count_factors(Integer n, unsigned long p) {
  REQUIRE(n != 0);
  long long c = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    ++c;
  }
  return c;
}

Integer plain_factorial(unsigned k) {
  Integer f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("rational construction canonicalizes") {
  const ExactRational q(Integer(6), Integer(-4));
  CHECK(q.numerator() == -3);
  CHECK(q.denominator() == 2);
  CHECK(q.str() == "-3/2");
  CHECK(q.to_double() == -1.5);
  CHECK(q.sign() == -1);

  CHECK(ExactRational().is_zero());
  CHECK(ExactRational(7).str() == "7");
  CHECK_THROWS_AS(ExactRational(Integer(1), Integer(0)), std::invalid_argument);
}

TEST_CASE("rational arithmetic round trips") {
  const ExactRational a(Integer(3), Integer(8));
  const ExactRational b(Integer(-5), Integer(12));
  CHECK((a + b).str() == "-1/24");
  CHECK((a - b).str() == "19/24");
  CHECK((a * b).str() == "-5/32");
  CHECK((a / b).str() == "-9/10");
  CHECK((a / b) * b == a);
  CHECK(-(a + b) == ExactRational(-1) * a - b);
  CHECK(a < ExactRational(1));
  CHECK(b < a);
  CHECK_THROWS_AS(a / ExactRational(), std::invalid_argument);
}

TEST_CASE("primality guard") {
  CHECK(daflow::is_prime(2));
  CHECK(daflow::is_prime(3));
  CHECK(daflow::is_prime(97));
  CHECK_FALSE(daflow::is_prime(0));
  CHECK_FALSE(daflow::is_prime(1));
  CHECK_FALSE(daflow::is_prime(91));
  CHECK_THROWS_AS(daflow::require_prime(6), std::invalid_argument);
}

TEST_CASE("valuation of plain rationals") {
  CHECK(daflow::padic_valuation(ExactRational(12), 2) == PAdicValuation{2, 2, false});
  CHECK(daflow::padic_valuation(ExactRational(Integer(3), Integer(8)), 2) ==
        PAdicValuation{2, -3, false});
  CHECK(daflow::padic_valuation(ExactRational(25), 5) == PAdicValuation{5, 2, false});
  CHECK(daflow::padic_valuation(ExactRational(Integer(7), Integer(9)), 3) ==
        PAdicValuation{3, -2, false});
  CHECK(daflow::padic_valuation(ExactRational(), 2).infinite);
  CHECK_THROWS_AS(daflow::padic_valuation(ExactRational(1), 4), std::invalid_argument);
}

TEST_CASE("valuation is additive and ultrametric") {
  std::mt19937_64 gen(20240817);
  auto draw = [&]() {
    long num = static_cast<long>(gen() % 1999) - 999;
    if (num == 0) num = 1;
    const long den = static_cast<long>(gen() % 998) + 1;
    return ExactRational(Integer(num), Integer(den));
  };
  const std::uint64_t primes[] = {2, 3, 5, 7};
  for (int trial = 0; trial < 200; ++trial) {
    const ExactRational a = draw();
    const ExactRational b = draw();
    for (std::uint64_t p : primes) {
      const long long va = daflow::padic_valuation(a, p).exponent;
      const long long vb = daflow::padic_valuation(b, p).exponent;
      CHECK(daflow::padic_valuation(a * b, p).exponent == va + vb);
      const ExactRational sum = a + b;
      if (!sum.is_zero()) {
        const long long vs = daflow::padic_valuation(sum, p).exponent;
        CHECK(vs >= std::min(va, vb));
        if (va != vb) CHECK(vs == std::min(va, vb));
      }
    }
  }
}

TEST_CASE("factorial valuation against materialized factorials") {
  for (unsigned k : {0u, 1u, 2u, 5u, 10u, 31u, 32u, 100u, 243u, 300u}) {
    if (k == 0) {
      CHECK(daflow::factorial_valuation(0, 2) == 0);
      continue;
    }
    Integer f = plain_factorial(k);
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul})
      CHECK(daflow::factorial_valuation(k, p) == count_factors(f, p));
  }
}

TEST_CASE("factorial 2-adic valuation equals k minus popcount") {
  for (std::uint64_t k = 1; k <= 1000000; k += (k < 4096 ? 1 : 997)) {
    const long long expected =
        static_cast<long long>(k) - std::popcount(static_cast<std::uint64_t>(k));
    REQUIRE(daflow::factorial_valuation(k, 2) == expected);
  }
}

TEST_CASE("leading series coefficients") {
  auto frac = [](long n, long d) { return ExactRational(Integer(n), Integer(d)); };
  CHECK(daflow::h_coefficient(1) == frac(1, 1));
  CHECK(daflow::h_coefficient(2) == frac(1, 4));
  CHECK(daflow::h_coefficient(3) == frac(2, 27));
  CHECK(daflow::h_coefficient(4) == frac(3, 128));
  CHECK(daflow::h_coefficient(5) == frac(24, 3125));
  CHECK(daflow::h_coefficient(6) == frac(5, 1944));
  CHECK(daflow::h_coefficient(8) == frac(315, 1048576));
  CHECK_THROWS_AS(daflow::h_coefficient(0), std::invalid_argument);
  CHECK_THROWS_AS(daflow::h_coefficient(daflow::kCoefficientCap + 1),
                  std::invalid_argument);
}

TEST_CASE("series prefix is consistent with single coefficients") {
  const auto prefix = daflow::SeriesCoefficients::prefix(64);
  REQUIRE(prefix.order == 64);
  REQUIRE(prefix.coefficients.size() == 64);
  for (unsigned k = 1; k <= 64; ++k)
    CHECK(prefix.coefficients[k - 1] == daflow::h_coefficient(k));
}

TEST_CASE("valuation shortcut agrees with the materialized coefficient") {
  const auto prefix = daflow::SeriesCoefficients::prefix(2000);
  for (unsigned k = 1; k <= 2000; ++k) {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
      const auto direct = daflow::padic_valuation(prefix.coefficients[k - 1], p);
      REQUIRE(daflow::h_coefficient_valuation(k, p) == direct.exponent);
    }
  }
}

TEST_CASE("2-adic valuations along powers of two") {
  // Frozen from repeated-division counts on the exact fractions.
  const long long expected[] = {-2,    -7,    -20,   -53,   -134,  -327,
                                -776,  -1801, -4106, -9227, -20492};
  for (unsigned j = 1; j <= 11; ++j) {
    const std::uint64_t k = std::uint64_t{1} << j;
    const long long v = daflow::h_coefficient_valuation(k, 2);
    CHECK(v == expected[j - 1]);
    // Closed form (1 - j) 2^j - j - 1 and the growth bound (j - 1) 2^j + 1.
    const long long pw = static_cast<long long>(k);
    CHECK(v == (1 - static_cast<long long>(j)) * pw - j - 1);
    CHECK(-v >= (static_cast<long long>(j) - 1) * pw + 1);
  }
  for (unsigned j = 12; j <= 20; ++j) {
    const long long pw = 1ll << j;
    CHECK(daflow::h_coefficient_valuation(std::uint64_t{1} << j, 2) ==
          (1 - static_cast<long long>(j)) * pw - j - 1);
  }
  // Independent recount for one mid-size row: a_16 = 15!/16^16.
  Integer f = plain_factorial(15);
  CHECK(count_factors(f, 2) - 16 * 4 == -53);
}

TEST_CASE("violation index for the exponential-growth bound") {
  CHECK(daflow::min_violating_j(0.34) == 1);
  CHECK(daflow::min_violating_j(0.35) == 2);
  CHECK(daflow::min_violating_j(0.5) == 2);
  CHECK(daflow::min_violating_j(1.0) == 3);
  CHECK(daflow::min_violating_j(5.0) == 9);
  CHECK(daflow::min_violating_j(20.0) == 30);
  CHECK_THROWS_AS(daflow::min_violating_j(0.0), std::invalid_argument);
  CHECK_THROWS_AS(daflow::min_violating_j(-1.0), std::invalid_argument);

  unsigned last = 1;
  for (double c = 0.25; c <= 16.0; c *= 2.0) {
    const unsigned j = daflow::min_violating_j(c);
    CHECK(j >= last);  // larger constants can only delay the violation
    last = j;
  }
}

TEST_CASE("sibuya report rows are exact and self-consistent") {
  const auto rows = daflow::sibuya_sperber_report(10, 2);
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    CHECK(row.k == (std::uint64_t{1} << row.j));
    CHECK(row.valuation == daflow::h_coefficient_valuation(row.k, 2));
    CHECK(-row.valuation >= row.bound_exponent);
    CHECK(row.log_norm_over_k ==
          Catch::Approx(-static_cast<double>(row.valuation) * std::log(2.0) /
                        static_cast<double>(row.k)));
  }
  // The per-k log-norm growth is what defeats any fixed exponential bound:
  // it increases without saturating along the subsequence.
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].log_norm_over_k > rows[i - 1].log_norm_over_k);

  const auto rows3 = daflow::sibuya_sperber_report(6, 3);
  for (const auto& row : rows3) {
    CHECK(row.valuation == daflow::h_coefficient_valuation(row.k, 3));
    CHECK(row.bound_exponent ==
          static_cast<long long>(row.j) * static_cast<long long>(row.k) -
              static_cast<long long>((row.k - 1) / 2));
  }
  CHECK_THROWS_AS(daflow::sibuya_sperber_report(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(daflow::sibuya_sperber_report(25, 2), std::invalid_argument);
  CHECK_THROWS_AS(daflow::sibuya_sperber_report(5, 6), std::invalid_argument);
}
