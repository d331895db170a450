#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "pathlaw/functionals.hpp"
#include "pathlaw/stochastic.hpp"

using namespace pathlaw;

namespace {

Path const_path(double c, double t, std::size_t n) {
  return Path(TimeGrid(t, n), std::vector<double>(n + 1, c));
}

Path linear_path(double t, std::size_t n) {
  TimeGrid g(t, n);
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = g.node(k);
  return Path(g, std::move(v));
}

// hand antiderivative: integral of e^{2s} over [0,1] is (e^2 - 1)/2
constexpr double kA1Linear = 3.1945280494653248;
constexpr double kSinh1 = 1.1752011936438014;

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TimeGrid(0.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Path(TimeGrid(1.0, 4), {0.0, 1.0}), std::invalid_argument);
  const TimeGrid g(2.0, 8);
  CHECK(g.dt() == doctest::Approx(0.25));
  CHECK(g.node(8) == 2.0);
}

TEST_CASE("A of the zero path is s") {
  const Path p = const_path(0.0, 1.0, 64);
  const auto prof = exp_functional_A(p);
  for (std::size_t k = 0; k <= 64; ++k)
    CHECK(prof.A[k] == doctest::Approx(p.grid.node(k)).epsilon(1e-14));
  CHECK(prof.Z[64] == doctest::Approx(1.0));
  CHECK(prof.mode == ProfileMode::Quadrature);
}

TEST_CASE("A of a constant path is s e^{2c}") {
  const double c = 0.7;
  const Path p = const_path(c, 2.0, 32);
  const auto prof = exp_functional_A(p);
  for (std::size_t k = 1; k <= 32; ++k)
    CHECK(prof.A[k] == doctest::Approx(p.grid.node(k) * std::exp(2.0 * c)).epsilon(1e-13));
}

TEST_CASE("linear path converges to the hand antiderivative at second order") {
  double prev_err = 0.0;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto prof = exp_functional_A(linear_path(1.0, n));
    const double err = std::abs(prof.a_end() - kA1Linear);
    if (prev_err > 0.0) {
      const double ratio = prev_err / err;
      CHECK(ratio > 3.0);
      CHECK(ratio < 5.0);
    }
    prev_err = err;
  }
}

TEST_CASE("profile invariants on Brownian paths") {
  const TimeGrid g(1.0, 256);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const Path b = sample_bm(g, RngSpec{11}, i);
    const auto prof = exp_functional_A(b);
    CHECK(prof.A[0] == 0.0);
    for (std::size_t k = 1; k <= 256; ++k) {
      CHECK(prof.A[k] > prof.A[k - 1]);  // strictly increasing
      const double rel = std::abs(prof.Z[k] * std::exp(b.values[k]) - prof.A[k]) / prof.A[k];
      CHECK(rel <= 1e-13);
    }
    CHECK(prof.a_end() ==
          doctest::Approx(std::exp(b.endpoint()) * prof.z_end()).epsilon(1e-13));
  }
}

TEST_CASE("exponent guard names the node") {
  TimeGrid g(1.0, 4);
  std::vector<double> v = {0.0, 1.0, 400.0, 1.0, 0.0};
  CHECK_THROWS_WITH_AS(exp_functional_A(Path(g, v)),
                       doctest::Contains("node 2"), std::range_error);
}

TEST_CASE("time reversal") {
  SUBCASE("constant path maps to zero") {
    const Path p = const_path(3.2, 1.0, 16);
    const Path r = time_reverse(p);
    for (double v : r.values) CHECK(v == 0.0);
  }
  SUBCASE("linear path reverses sign") {
    const Path p = linear_path(1.0, 64);
    const Path r = time_reverse(p);
    for (std::size_t k = 0; k <= 64; ++k)
      CHECK(r.values[k] == doctest::Approx(-p.grid.node(k)).epsilon(1e-14));
  }
  SUBCASE("involution on Brownian paths") {
    const Path b = sample_bm(TimeGrid(1.0, 512), RngSpec{3}, 9);
    const Path rr = time_reverse(time_reverse(b));
    for (std::size_t k = 0; k < b.n_nodes(); ++k)
      CHECK(std::abs(rr.values[k] - b.values[k]) <= 1e-12);
  }
}

TEST_CASE("time-reversal additivity of the trapezoid A") {
  const Path b = sample_bm(TimeGrid(1.0, 256), RngSpec{5}, 2);
  const auto prof = exp_functional_A(b);
  const auto rprof = exp_functional_A(time_reverse(b));
  const double scale = std::exp(-2.0 * b.endpoint());
  for (std::size_t k = 1; k <= 256; ++k) {
    const double want = scale * (prof.a_end() - prof.A[256 - k]);
    CHECK(std::abs(rprof.A[k] - want) / want <= 1e-12);
  }
}

TEST_CASE("endpoint state") {
  SUBCASE("zero path") {
    const Path p = const_path(0.0, 1.0, 8);
    const auto [xi, zeta] = path_endpoint_state(p, exp_functional_A(p));
    CHECK(xi == 0.0);
    CHECK(zeta == doctest::Approx(1.0));
  }
  SUBCASE("constant path gives (c, e^c)") {
    const double c = -0.4;
    const Path p = const_path(c, 1.0, 64);
    const auto [xi, zeta] = path_endpoint_state(p, exp_functional_A(p));
    CHECK(xi == c);
    CHECK(zeta == doctest::Approx(std::exp(c)).epsilon(1e-12));
  }
  SUBCASE("linear path gives (1, sinh 1)") {
    const Path p = linear_path(1.0, 4096);
    const auto [xi, zeta] = path_endpoint_state(p, exp_functional_A(p));
    CHECK(xi == 1.0);
    CHECK(zeta == doctest::Approx(kSinh1).epsilon(1e-7));
  }
  SUBCASE("mismatched profile rejected") {
    const Path p = const_path(0.0, 1.0, 8);
    const Path q = const_path(0.0, 1.0, 16);
    CHECK_THROWS_AS(path_endpoint_state(q, exp_functional_A(p)), std::invalid_argument);
  }
}
