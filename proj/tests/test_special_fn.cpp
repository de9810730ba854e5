#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "daflow/config.hpp"
#include "daflow/errors.hpp"
#include "daflow/quadrature.hpp"
#include "daflow/roots.hpp"
#include "daflow/special.hpp"

using Catch::Matchers::WithinAbs;
using daflow::EvalConfig;

namespace {

// Reference values below were computed to 25 digits with arbitrary-precision
// quadrature and root finding (mpmath), independent of this implementation,
// and frozen here.
constexpr double kH1 = 1.359098277113548264643524;
constexpr double kH2 = 0.5735125407203306316918595;
constexpr double kH3 = 0.3641795317979162230525569;
constexpr double kH10 = 0.1025764972866295715527732;
constexpr double kHm1 = -0.8063956162073262251797959;
constexpr double kHm2 = -0.4455000576413948084879677;
constexpr double kHm3 = -0.3080381234322377345413681;
constexpr double kHm01 = -3.315657848390027549821714;

}  // namespace

TEST_CASE("config validation rejects dishonest settings") {
  EvalConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.abs_tol = 1e-13;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EvalConfig{};
  cfg.max_subdivisions = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EvalConfig{};
  cfg.singularity_guard = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EvalConfig{};
  cfg.tail_cutoff_slack = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("adaptive quadrature on closed forms") {
  const EvalConfig cfg;
  auto sq = [](double x) { return x * x; };
  auto r = daflow::integrate_adaptive(sq, 0.0, 1.0, cfg.abs_tol, cfg.max_subdivisions);
  CHECK_THAT(r.value, WithinAbs(1.0 / 3.0, 1e-14));
  CHECK(r.subdivisions_used >= 1);
  CHECK(r.error_estimate >= 0.0);

  auto wave = [](double x) { return std::sin(x); };
  r = daflow::integrate_adaptive(wave, 0.0, M_PI, 1e-12, cfg.max_subdivisions);
  CHECK_THAT(r.value, WithinAbs(2.0, 1e-11));

  auto spike = [](double x) { return 1.0 / std::sqrt(x + 1e-8); };
  r = daflow::integrate_adaptive(spike, 0.0, 1.0, 1e-10, cfg.max_subdivisions);
  CHECK_THAT(r.value, WithinAbs(2.0 * (std::sqrt(1.0 + 1e-8) - 1e-4), 1e-9));
}

TEST_CASE("quadrature reports budget exhaustion with a partial value") {
  auto wiggle = [](double x) { return std::sin(50.0 * x); };
  try {
    daflow::integrate_adaptive(wiggle, 0.0, 10.0, 1e-12, 2);
    FAIL("expected convergence_error");
  } catch (const daflow::convergence_error& e) {
    CHECK(std::isfinite(e.partial()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("brent finds brackets and rejects non-brackets") {
  auto f = [](double x) { return std::cos(x); };
  CHECK_THAT(daflow::brent_root(f, 1.0, 2.0, 1e-14, 1e-15), WithinAbs(M_PI / 2.0, 1e-12));
  CHECK_THROWS_AS(daflow::brent_root(f, 0.0, 1.0, 1e-14, 1e-15),
                  daflow::convergence_error);
}

TEST_CASE("domain predicate for H") {
  const EvalConfig cfg;
  CHECK(daflow::in_domain_H(-1.0, cfg));
  CHECK(daflow::in_domain_H(-1e-8, cfg));
  CHECK(daflow::in_domain_H(0.37 + 1e-2, cfg));
  CHECK_FALSE(daflow::in_domain_H(0.0, cfg));
  CHECK_FALSE(daflow::in_domain_H(-0.5e-9, cfg));
  CHECK_FALSE(daflow::in_domain_H(0.2, cfg));
  CHECK_FALSE(daflow::in_domain_H(daflow::kReciprocalE, cfg));
  CHECK_FALSE(daflow::in_domain_H(daflow::kReciprocalE + 0.5e-9, cfg));
  CHECK(daflow::in_domain_H(daflow::kReciprocalE + 1e-8, cfg));
}

TEST_CASE("H against frozen references") {
  const EvalConfig cfg;
  const struct {
    double c, expected;
  } cases[] = {{1.0, kH1},  {2.0, kH2},   {3.0, kH3},   {10.0, kH10},
               {-1.0, kHm1}, {-2.0, kHm2}, {-3.0, kHm3}, {-0.1, kHm01},
               {0.5 + std::exp(-1.0), 1.664302903913564879509207}};
  for (const auto& t : cases) {
    const auto r = daflow::eval_H(t.c, cfg);
    CHECK_THAT(r.value, WithinAbs(t.expected, 2e-10));
    CHECK(std::fabs(r.value - t.expected) <= r.error_estimate + 1e-12);
    CHECK(r.error_estimate <= cfg.abs_tol);
  }
}

TEST_CASE("H far from and close to the excluded interval") {
  const EvalConfig cfg;
  CHECK_THAT(daflow::eval_H(200.0, cfg).value, WithinAbs(0.005006259273931737, 1e-10));
  CHECK_THAT(daflow::eval_H(-200.0, cfg).value, WithinAbs(-0.004993759244634782, 1e-10));
  // Asymptotically H(c) ~ 1/c on both sides.
  CHECK_THAT(1e6 * daflow::eval_H(1e6, cfg).value, WithinAbs(1.0, 1e-5));
  CHECK_THAT(-1e6 * daflow::eval_H(-1e6, cfg).value, WithinAbs(1.0, 1e-5));
  // Logarithmic blow-up approaching 1/e from the right.
  CHECK_THAT(daflow::eval_H(daflow::kReciprocalE + 1e-3, cfg).value,
             WithinAbs(82.1268228679997, 1e-8));
  // One step closer the integrand is cancellation-limited: the default
  // tolerance is unattainable in double precision, and the failure carries a
  // partial value good to the achievable accuracy.
  try {
    daflow::eval_H(daflow::kReciprocalE + 1e-6, cfg);
    FAIL("expected convergence_error");
  } catch (const daflow::convergence_error& e) {
    CHECK_THAT(e.partial(), WithinAbs(2691.63535552101, 1e-7));
  }
  EvalConfig loose = cfg;
  loose.abs_tol = 1e-7;
  CHECK_THAT(daflow::eval_H(daflow::kReciprocalE + 1e-6, loose).value,
             WithinAbs(2691.63535552101, 2e-7));
}

TEST_CASE("H is decreasing on each branch") {
  const EvalConfig cfg;
  double prev = daflow::eval_H(-5.0, cfg).value;
  for (double c = -4.5; c < -0.04; c += 0.5) {
    const double v = daflow::eval_H(c, cfg).value;
    CHECK(v < prev);
    prev = v;
  }
  prev = daflow::eval_H(0.4, cfg).value;
  for (double c = 0.6; c < 6.0; c += 0.2) {
    const double v = daflow::eval_H(c, cfg).value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("H domain errors carry the excluded interval") {
  const EvalConfig cfg;
  for (double c : {0.0, 0.2, daflow::kReciprocalE, -1e-12}) {
    try {
      daflow::eval_H(c, cfg);
      FAIL("expected domain_error");
    } catch (const daflow::domain_error& e) {
      CHECK(e.excluded().lo == 0.0);
      CHECK_THAT(e.excluded().hi, WithinAbs(daflow::kReciprocalE, 1e-15));
    }
  }
  CHECK_THROWS_AS(daflow::eval_H(std::nan(""), cfg), std::invalid_argument);
}

TEST_CASE("H honors a loosened tolerance") {
  EvalConfig cfg;
  cfg.abs_tol = 1e-6;
  const auto r = daflow::eval_H(-1.0, cfg);
  CHECK_THAT(r.value, WithinAbs(kHm1, 1e-6));
  CHECK(r.error_estimate <= 1e-6);
}

TEST_CASE("forbidden interval tracks the denominator zeros") {
  const auto j_neg = daflow::forbidden_interval(-1.0);
  CHECK_THAT(j_neg.lo, WithinAbs(-std::exp(1.0), 1e-15));
  CHECK(j_neg.hi == 0.0);
  const auto j_mid = daflow::forbidden_interval(0.5);
  CHECK(j_mid.lo == 0.0);
  CHECK_THAT(j_mid.hi, WithinAbs(0.5 * std::exp(-0.5), 1e-15));
  const auto j_sat = daflow::forbidden_interval(7.0);
  CHECK(j_sat.lo == 0.0);
  CHECK_THAT(j_sat.hi, WithinAbs(daflow::kReciprocalE, 1e-15));
}

TEST_CASE("F at frozen points and structural identities") {
  const EvalConfig cfg;
  CHECK(daflow::eval_F(0.0, 2.0, cfg).value == 0.0);
  CHECK_THAT(daflow::eval_F(1.0, 2.0, cfg).value,
             WithinAbs(0.3595167171130584876668873, 2e-10));
  // F(s, c) climbs to H(c) as s grows when c > 1/e.
  CHECK_THAT(daflow::eval_F(30.0, 2.0, cfg).value, WithinAbs(kH2, 2e-10));
  // Negative s with c below the forbidden interval: the signed integral is
  // positive because the denominator is negative there.
  CHECK(daflow::eval_F(-1.0, -3.0, cfg).value > 0.0);
  // Monotonicity in s on the positive-denominator branch.
  double prev = 0.0;
  for (double s = 0.2; s <= 2.0; s += 0.2) {
    const double v = daflow::eval_F(s, 2.0, cfg).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("F rejects c inside J(s)") {
  const EvalConfig cfg;
  try {
    daflow::eval_F(1.0, 0.3, cfg);
    FAIL("expected domain_error");
  } catch (const daflow::domain_error& e) {
    CHECK(e.excluded().contains(0.3));
  }
  try {
    daflow::eval_F(-1.0, -0.2, cfg);
    FAIL("expected domain_error");
  } catch (const daflow::domain_error& e) {
    CHECK(e.excluded().contains(-0.2));
  }
  CHECK_THROWS_AS(daflow::eval_F(5.0, 0.0, cfg), daflow::domain_error);
  CHECK_THROWS_AS(daflow::eval_F(0.5, 0.5 * std::exp(-0.5), cfg), daflow::domain_error);
}

TEST_CASE("s_star against frozen references") {
  const EvalConfig cfg;
  const struct {
    double c, expected;
  } cases[] = {{0.2, 0.259171101819073745056652},
               {0.1, 0.1118325591589629648335695},
               {0.3, 0.4894022271802149690362313},
               {-1.0, -0.5671432904097838729999687},
               {-std::exp(1.0), -1.0}};
  for (const auto& t : cases) {
    const double s = daflow::s_star(t.c, cfg);
    CHECK_THAT(s, WithinAbs(t.expected, 1e-9));
    CHECK(std::fabs(s * std::exp(-s) - t.c) <= cfg.abs_tol);
    CHECK(s < 1.0);
  }
  CHECK_THROWS_AS(daflow::s_star(0.4, cfg), daflow::domain_error);
  CHECK_THROWS_AS(daflow::s_star(daflow::kReciprocalE, cfg), daflow::domain_error);
  CHECK_THROWS_AS(daflow::s_star(0.0, cfg), daflow::domain_error);
}

TEST_CASE("series evaluation agrees with quadrature through the substitution") {
  const EvalConfig cfg;
  // The series at z equals the integral form at c = 1/z wherever both are
  // defined; the two code paths share nothing numerically.
  for (double z : {-2.5, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 2.5}) {
    CAPTURE(z);
    const double series = daflow::eval_h_series(z, cfg);
    const double integral = daflow::eval_H(1.0 / z, cfg).value;
    CHECK_THAT(series, WithinAbs(integral, 5e-10));
  }
  CHECK_THAT(daflow::eval_h_series(1.0, cfg), WithinAbs(kH1, 2e-10));
  CHECK_THAT(daflow::eval_h_series(0.5, cfg), WithinAbs(kH2, 2e-10));
  CHECK(daflow::eval_h_series(0.0, cfg) == 0.0);
}

TEST_CASE("series evaluation near the radius") {
  const EvalConfig cfg;
  const double z = 2.69;  // within the admissible disk, thousands of terms
  const double series = daflow::eval_h_series(z, cfg);
  const double integral = daflow::eval_H(1.0 / z, cfg).value;
  CHECK_THAT(series, WithinAbs(integral, 2e-9));
  CHECK_THROWS_AS(daflow::eval_h_series(std::exp(1.0), cfg), daflow::domain_error);
  CHECK_THROWS_AS(daflow::eval_h_series(-2.71, cfg), daflow::domain_error);
}
