#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "pathlaw/quad.hpp"
#include "pathlaw/specfun.hpp"

using namespace pathlaw;

namespace {

// Rectangle-rule oracle for the integral representation, independent of the
// production quadrature. Frozen value below was produced by this rule at
// 10^6 panels before the evaluator was built.
double oracle_k(double nu, double x, long n = 400000, double upper = 12.0) {
  const double h = upper / static_cast<double>(n);
  double s = 0.0;
  for (long i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) * h;
    s += std::exp(-x * std::cosh(u)) * std::cosh(nu * u);
  }
  return s * h;
}

constexpr double kK0At1 = 0.4210244382406076;

double half_integer_k(double z) { return std::sqrt(M_PI / (2.0 * z)) * std::exp(-z); }

}  // namespace

TEST_CASE("K_0(1) against the rectangle oracle") {
  CHECK(oracle_k(0.0, 1.0) == doctest::Approx(kK0At1).epsilon(1e-10));
  CHECK(bessel_k(0.0, 1.0) == doctest::Approx(kK0At1).epsilon(1e-10));
}

TEST_CASE("half-integer closed form over the working range") {
  // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}, derived by hand as the oracle
  CHECK(bessel_k(0.5, 2.0) == doctest::Approx(0.1199377719680614).epsilon(1e-10));
  for (double z = 0.1; z <= 50.0; z *= 1.45) {
    const double rel = std::abs(bessel_k(0.5, z) - half_integer_k(z)) / half_integer_k(z);
    CHECK(rel <= 1e-9);
  }
}

TEST_CASE("order is mapped through its absolute value") {
  CHECK(bessel_k(-0.7, 1.3) == doctest::Approx(bessel_k(0.7, 1.3)).epsilon(1e-13));
}

TEST_CASE("input validation and underflow routing") {
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_k(0.5, -2.0), std::invalid_argument);
  CHECK_THROWS_WITH_AS(bessel_k(0.0, 800.0), doctest::Contains("bessel_k_log"),
                       std::range_error);
  CHECK(bessel_k_log(0.0, 800.0) == doctest::Approx(-800.0 + 0.5 * std::log(M_PI / 1600.0))
                                        .epsilon(1e-3));
}

TEST_CASE("node-budget doubling is self-consistent") {
  BesselEvaluator coarse;
  coarse.max_panels = 1 << 10;
  for (double nu : {0.0, 0.5, 1.7, 3.0})
    for (double x : {0.05, 0.3, 2.0, 10.0, 50.0}) {
      const double a = bessel_k_log(nu, x, coarse);
      const double b = bessel_k_log(nu, x);  // default budget is 64x larger
      CHECK(std::abs(a - b) <= 1e-9 * std::abs(b) + 1e-12);
    }
}

TEST_CASE("ratio closed form and recurrence") {
  SUBCASE("mu = 1/2 gives 1 + 1/z") {
    for (double z : {0.2, 1.0, 7.0, 30.0})
      CHECK(bessel_k_ratio(0.5, z) == doctest::Approx(1.0 + 1.0 / z).epsilon(1e-9));
  }
  SUBCASE("drift reduction for mu = 1/2") {
    // mu - w * (1 + 1/w) == -1/2 - w with w = lam e^x
    const double w = 1.0 * std::exp(0.3);
    const double drift = 0.5 - w * bessel_k_ratio(0.5, w);
    CHECK(drift == doctest::Approx(-0.5 - w).epsilon(1e-9));
  }
  SUBCASE("large argument limit") {
    CHECK(std::abs(bessel_k_ratio(0.8, 1000.0) - 1.0) <= 2e-3);
  }
  SUBCASE("recurrence residual on the probe grid") {
    for (double mu : {0.3, 0.7, 1.2, 2.0})
      for (double z : {0.1, 0.6, 3.0, 12.0, 50.0}) {
        const double km = bessel_k_log(mu - 1.0, z);
        const double k0 = bessel_k_log(mu, z);
        const double kp = bessel_k_log(mu + 1.0, z);
        const double lhs = std::exp(km - k0) - std::exp(kp - k0);
        const double rhs = -2.0 * mu / z;
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
      }
  }
  SUBCASE("z must be positive") { CHECK_THROWS_AS(bessel_k_ratio(0.5, 0.0), std::invalid_argument); }
}

TEST_CASE("conditional density") {
  SUBCASE("symmetry and mode at zero") {
    for (double zeta : {0.4, 1.0, 3.0}) {
      CHECK(conditional_density(0.8, zeta) == conditional_density(-0.8, zeta));
      CHECK(conditional_density(0.0, zeta) > conditional_density(0.3, zeta));
    }
  }
  SUBCASE("normalization by adaptive quadrature") {
    for (double zeta : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      const double half = std::acosh(60.0 * zeta + 1.0);
      const double mass = adaptive_simpson(
          [zeta](double xi) { return conditional_density(xi, zeta); }, -half, half, 1e-11);
      CHECK(std::abs(mass - 1.0) <= 1e-8);
    }
  }
  SUBCASE("zeta validation") {
    CHECK_THROWS_AS(conditional_density(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(conditional_density(0.0, -1.0), std::invalid_argument);
  }
}

TEST_CASE("tabulated log K tracks the direct evaluator") {
  const BesselKLogTable table(0.8);
  for (double z = 1e-6; z < 5e4; z *= 13.7)
    CHECK(std::abs(table.log_k(z) - bessel_k_log(0.8, z)) <= 1e-8 * std::max(1.0, std::abs(bessel_k_log(0.8, z))));
  // outside the grid it falls back to quadrature
  CHECK(table.log_k(1e-20) == doctest::Approx(bessel_k_log(0.8, 1e-20)).epsilon(1e-10));
}

TEST_CASE("ratio table matches the direct ratio") {
  const BesselKRatioTable table(0.5);
  for (double z : {0.01, 0.4, 3.0, 80.0})
    CHECK(table.ratio(z) == doctest::Approx(bessel_k_ratio(0.5, z)).epsilon(1e-8));
}
