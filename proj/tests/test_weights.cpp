#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pathlaw/weights.hpp"

using namespace pathlaw;

namespace {

// Brute-force oracle for the mass-balance root: midpoint-rule masses on a
// fixed |x| <= 12 window plus plain bisection. Independent of the solver.
double oracle_mass(double mu, double zeta, double a, double b, long n = 200000) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = a + (static_cast<double>(i) + 0.5) * h;
    s += std::exp(mu * x - std::cosh(x) / zeta);
  }
  return s * h;
}

double oracle_k_mu(double mu, double xi, double zeta) {
  const double w = oracle_mass(mu, zeta, -12.0, 12.0);
  const double target = w - oracle_mass(mu, zeta, -12.0, xi);
  double lo = -12.0, hi = 12.0;
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    (oracle_mass(mu, zeta, -12.0, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// value pinned by the oracle above before the solver was built
constexpr double kOne01 = 1.4145454464;

}  // namespace

TEST_CASE("builtin catalog: inverse and derivative invariants on the probe grid") {
  const std::vector<HFamily> families = {
      builtin_h(HKind::LogAffineShift, 1.0),  builtin_h(HKind::NegLogEmxAffine, 1.0),
      builtin_h(HKind::Translate, 0.7),       builtin_h(HKind::Reflect),
      builtin_h(HKind::LogEmxPlusLinear, 0.4), builtin_h(HKind::NegLogExPlusLinear, 0.4)};
  for (const auto& h : families) {
    CAPTURE(h.label);
    for (int i = 0; i < 20; ++i) {
      const double xi = -3.0 + 6.0 * i / 19.0;
      for (int j = 0; j < 10; ++j) {
        const double zeta = 0.1 + (5.0 - 0.1) * j / 9.0;
        if (!h.in_domain(xi, zeta)) continue;
        const double y = h.eval(xi, zeta);
        CHECK(h.in_image(y, zeta));
        CHECK(std::abs(h.inverse(y, zeta) - xi) <= 1e-10);
        const double eps = 1e-6;
        const double fd = (h.eval(xi + eps, zeta) - h.eval(xi - eps, zeta)) / (2.0 * eps);
        const double de = h.deriv(xi, zeta);
        CHECK(std::abs(fd - de) <= std::max(1e-6, 1e-4 * std::abs(de)));
      }
    }
  }
}

TEST_CASE("builtin catalog: closed-form spot checks") {
  SUBCASE("translate by zero is the identity") {
    const auto h = builtin_h(HKind::Translate, 0.0);
    CHECK(h.eval(0.37, 2.0) == 0.37);
    CHECK(h.deriv(0.37, 2.0) == 1.0);
    CHECK(h.inverse(0.37, 2.0) == 0.37);
  }
  SUBCASE("log-affine at alpha = 1") {
    const auto h = builtin_h(HKind::LogAffineShift, 1.0);
    CHECK(h.eval(0.0, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(h.inverse(-std::log(2.0), 1.0) == doctest::Approx(0.0));
  }
  SUBCASE("image boundary of the second family is strict") {
    const auto h = builtin_h(HKind::NegLogEmxAffine, 1.0);
    CHECK_FALSE(h.in_image(0.0, 1.0));  // 1/(e^0 * 1) = 1, not > 1
    CHECK(h.in_image(0.0, 0.5));
  }
  SUBCASE("negative parameters rejected") {
    CHECK_THROWS_AS(builtin_h(HKind::LogAffineShift, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(builtin_h(HKind::LogEmxPlusLinear, -1.0), std::invalid_argument);
  }
}

TEST_CASE("inverse_family swaps roles") {
  const auto h = builtin_h(HKind::NegLogEmxAffine, 0.5);
  const auto inv = inverse_family(h);
  const double xi = 0.3, zeta = 0.8;
  const double y = h.eval(xi, zeta);
  CHECK(inv.eval(y, zeta) == doctest::Approx(xi).epsilon(1e-12));
  CHECK(inv.in_domain(y, zeta) == h.in_image(y, zeta));
  // derivative of the inverse at the image point is 1/h'
  CHECK(inv.deriv(y, zeta) == doctest::Approx(1.0 / h.deriv(xi, zeta)).epsilon(1e-10));
}

TEST_CASE("girsanov density") {
  SUBCASE("identity family gives 1") {
    const auto h = builtin_h(HKind::Translate, 0.0);
    CHECK(girsanov_density(h, 0.4, 1.3) == doctest::Approx(1.0));
  }
  SUBCASE("reflection gives 1 by evenness of cosh") {
    const auto h = builtin_h(HKind::Reflect);
    for (double xi : {-2.0, 0.0, 1.7})
      CHECK(girsanov_density(h, xi, 0.9) == doctest::Approx(1.0));
  }
  SUBCASE("translate by 1 at the origin") {
    const auto h = builtin_h(HKind::Translate, 1.0);
    // exp(cosh 0 - cosh(-1)) by hand
    CHECK(girsanov_density(h, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0 - std::cosh(1.0))).epsilon(1e-13));
  }
  SUBCASE("overflow is a range error") {
    const auto h = builtin_h(HKind::Translate, 20.0);
    CHECK_THROWS_AS(girsanov_density(h, 20.0, 1e-4), std::range_error);
  }
}

TEST_CASE("solver reproduces the reflection for the unit weight") {
  const auto lam = lambda_one(1.0);
  for (int i = 0; i < 20; ++i) {
    const double xi = -3.0 + 6.0 * i / 19.0;
    for (double zeta : {0.2, 0.5, 1.0, 2.0, 5.0})
      CHECK(std::abs(solve_h_lambda(lam, xi, zeta) + xi) <= 1e-8);
  }
}

TEST_CASE("k_mu against the brute-force oracle") {
  CHECK(std::abs(oracle_k_mu(1.0, 0.0, 1.0) - kOne01) <= 5e-9);  // oracle self-check
  CHECK(std::abs(k_mu(1.0, 0.0, 1.0) - kOne01) <= 1e-8);
  CHECK(std::abs(k_mu(0.5, -0.4, 0.7) - oracle_k_mu(0.5, -0.4, 0.7)) <= 1e-7);
}

TEST_CASE("k_0 is the reflection and 0 is its fixed point") {
  for (double xi : {-1.2, 0.0, 0.5, 2.0})
    CHECK(std::abs(k_mu(0.0, xi, 1.4) + xi) <= 1e-8);
  CHECK(std::abs(k_mu(0.0, 0.0, 0.6)) <= 1e-9);
}

TEST_CASE("k_mu antisymmetry in mu") {
  CHECK(std::abs(k_mu(1.0, 0.7, 1.3) + k_mu(-1.0, -0.7, 1.3)) <= 1e-9);
  for (double mu : {0.5, 1.0})
    for (double xi : {-1.8, -0.2, 1.1})
      for (double zeta : {0.4, 1.0, 2.5})
        CHECK(std::abs(k_mu(-mu, xi, zeta) + k_mu(mu, -xi, zeta)) <= 1e-8);
}

TEST_CASE("solver is self-inverse") {
  for (double mu : {-1.0, -0.5, 0.5, 1.0}) {
    const WeightLambda lam{[mu](double x, double) { return mu * x; }, 1.0, "tilt"};
    for (double xi : {-2.0, -0.6, 0.3, 1.5})
      for (double zeta : {0.3, 1.0, 3.0}) {
        const double h = solve_h_lambda(lam, xi, zeta);
        CHECK(std::abs(solve_h_lambda(lam, h, zeta) - xi) <= 1e-9);
      }
  }
}

TEST_CASE("solver is strictly decreasing and escapes any window") {
  const auto lam = lambda_exp_mu(0.7, 1.0);
  double prev = solve_h_lambda(lam, -3.0, 1.0);
  for (double xi = -2.5; xi <= 3.01; xi += 0.5) {
    const double h = solve_h_lambda(lam, xi, 1.0);
    CHECK(h < prev);
    prev = h;
  }
  CHECK(solve_h_lambda(lam, 8.0, 1.0) < -5.0);
  CHECK(solve_h_lambda(lam, -8.0, 1.0) > 5.0);
}

TEST_CASE("reweighting balance with a finite-difference slope") {
  const double eps = 1e-5;
  for (double mu : {0.0, 0.8}) {
    const auto lam = lambda_exp_mu(mu, 1.0);
    for (double xi : {-1.0, 0.2, 1.4})
      for (double zeta : {0.5, 1.5}) {
        const double h = solve_h_lambda(lam, xi, zeta);
        const double hp = solve_h_lambda(lam, xi + eps, zeta);
        const double hm = solve_h_lambda(lam, xi - eps, zeta);
        const double slope = (hp - hm) / (2.0 * eps);
        const double lhs = lam.eval(h, zeta) * std::exp(-std::cosh(h) / zeta) * std::abs(slope);
        const double rhs = lam.eval(xi, zeta) * std::exp(-std::cosh(xi) / zeta);
        CHECK(std::abs(lhs - rhs) / rhs <= 1e-5);
      }
  }
}

TEST_CASE("integrability holds for the bundled weights") {
  for (const auto& lam : {lambda_one(1.0), lambda_exp_mu(1.0, 1.0), lambda_cosh_mu(0.8, 1.0),
                          lambda_besselk(0.5, 1.0, 1.0), lambda_time_inhom(1.0)})
    for (double zeta : {0.3, 1.0, 4.0}) CHECK(weight_integrability_ok(lam, zeta));
}

TEST_CASE("solver error paths") {
  SUBCASE("non-finite weight is an input error") {
    const WeightLambda bad{[](double x, double) { return x > 0.5 ? std::nan("") : 0.0; },
                           1.0, "bad"};
    CHECK_THROWS_AS(solve_h_lambda(bad, 0.0, 1.0), std::invalid_argument);
  }
  SUBCASE("weight breaking integrability is reported") {
    // grows faster than the cosh factor decays
    const WeightLambda grow{[](double x, double) { return 2.0 * std::cosh(x); }, 1.0,
                            "exp(2 cosh x)"};
    CHECK_THROWS_AS(solve_h_lambda(grow, 0.0, 1.0), std::runtime_error);
    CHECK_FALSE(weight_integrability_ok(grow, 1.0));
  }
  SUBCASE("bad zeta") {
    CHECK_THROWS_AS(solve_h_lambda(lambda_one(1.0), 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(k_mu(0.5, 0.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("time-inhomogeneous weight solves to the unit tilt") {
  const auto lam = lambda_time_inhom(1.0);
  for (double xi : {-0.8, 0.3, 1.2})
    for (double zeta : {0.5, 1.0, 2.0})
      CHECK(std::abs(solve_h_lambda(lam, xi, zeta) - k_mu(1.0, xi, zeta)) <= 1e-8);
}
