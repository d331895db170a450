#include "pathlaw/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pathlaw {

namespace {

// log cosh(y) without overflow.
double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

struct LogIntegrand {
  double x, nu;
  double operator()(double u) const { return -x * std::cosh(u) + log_cosh(nu * u); }
};

// Location of the integrand maximum: u = 0 when nu^2 <= x, otherwise the
// root of x sinh(u) = nu tanh(nu u).
double peak_location(double nu, double x) {
  if (nu * nu <= x || nu == 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::asinh(nu / x) + 1.0;
  auto slope = [&](double u) { return -x * std::sinh(u) + nu * std::tanh(nu * u); };
  while (slope(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Smallest u >= u_peak where the log integrand has dropped by 60, capped.
double cutoff(const LogIntegrand& lf, double u_peak, double m, double cap) {
  const double drop = m - 60.0;
  double hi = u_peak + 1.0;
  while (hi < cap && lf(hi) > drop) hi *= 2.0;
  if (hi >= cap) return cap;
  double lo = u_peak;
  for (int it = 0; it < 100 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lf(mid) > drop ? lo : hi) = mid;
  }
  return hi;
}

double scaled_integral(const LogIntegrand& lf, double m, double upper,
                       const BesselEvaluator& ev) {
  auto f = [&](double u) { return std::exp(lf(u) - m); };
  std::size_t panels = 64;
  const double h0 = upper / static_cast<double>(panels);
  double prev = 0.0;
  {
    double acc = 0.5 * (f(0.0) + f(upper));
    for (std::size_t i = 1; i < panels; ++i) acc += f(h0 * static_cast<double>(i));
    prev = acc * h0;  // trapezoid seed; refined below
  }
  // Romberg-style panel doubling on the trapezoid sums, promoted to Simpson.
  double trap = prev, simpson_prev = 0.0, simpson = 0.0;
  while (true) {
    const double h = upper / static_cast<double>(panels);
    double mids = 0.0;
    for (std::size_t i = 0; i < panels; ++i)
      mids += f(h * (static_cast<double>(i) + 0.5));
    const double trap2 = 0.5 * trap + 0.5 * h * mids;
    simpson = (4.0 * trap2 - trap) / 3.0;
    panels *= 2;
    if (simpson_prev != 0.0 &&
        std::abs(simpson - simpson_prev) <= ev.rel_tol * std::abs(simpson))
      break;
    if (panels > ev.max_panels) break;
    simpson_prev = simpson;
    trap = trap2;
  }
  return simpson;
}

}  // namespace

double bessel_k_log(double nu, double x, const BesselEvaluator& ev) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::invalid_argument("bessel_k_log: x must be positive, got " + std::to_string(x));
  nu = std::abs(nu);
  const LogIntegrand lf{x, nu};
  const double u0 = peak_location(nu, x);
  const double m = lf(u0);
  const double upper = cutoff(lf, u0, m, ev.t_max);
  const double integral = scaled_integral(lf, m, upper, ev);
  return m + std::log(integral);
}

double bessel_k(double nu, double x, const BesselEvaluator& ev) {
  const double lk = bessel_k_log(nu, x, ev);
  if (lk < std::log(std::numeric_limits<double>::min()) + 2.0)
    throw std::range_error("bessel_k: result underflows at x = " + std::to_string(x) +
                           "; use bessel_k_log");
  return std::exp(lk);
}

double bessel_k_ratio(double mu, double z, const BesselEvaluator& ev) {
  if (!(z > 0.0)) throw std::invalid_argument("bessel_k_ratio: z must be positive");
  return std::exp(bessel_k_log(mu + 1.0, z, ev) - bessel_k_log(mu, z, ev));
}

double conditional_density(double xi, double zeta, const BesselEvaluator& ev) {
  if (!(zeta > 0.0)) throw std::invalid_argument("conditional_density: zeta must be positive");
  const double inv = 1.0 / zeta;
  if (!std::isfinite(inv))
    throw std::range_error("conditional_density: 1/zeta overflows");
  const double log_norm = std::log(2.0) + bessel_k_log(0.0, inv, ev);
  const double e = -std::cosh(xi) * inv - log_norm;
  return e < -745.0 ? 0.0 : std::exp(e);
}

BesselKLogTable::BesselKLogTable(double nu, double u_lo, double u_hi, std::size_t n_nodes)
    : nu_(std::abs(nu)), u_lo_(u_lo), u_hi_(u_hi) {
  if (n_nodes < 8 || !(u_hi > u_lo))
    throw std::invalid_argument("BesselKLogTable: bad grid");
  h_ = (u_hi_ - u_lo_) / static_cast<double>(n_nodes - 1);
  w_.resize(n_nodes);
  wp_.resize(n_nodes);
  const BesselEvaluator ev{};
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double u = u_lo_ + h_ * static_cast<double>(i);
    const double z = std::exp(u);
    const double l0 = bessel_k_log(nu_, z, ev);
    const double lm = bessel_k_log(nu_ - 1.0, z, ev);
    const double lp = bessel_k_log(nu_ + 1.0, z, ev);
    w_[i] = l0 + z;
    // d/du [log K + z] = z (1 - (K_{nu-1} + K_{nu+1}) / (2 K_nu))
    wp_[i] = z * (1.0 - 0.5 * (std::exp(lm - l0) + std::exp(lp - l0)));
  }
}

double BesselKLogTable::log_k(double z) const {
  if (!(z > 0.0)) throw std::invalid_argument("BesselKLogTable: z must be positive");
  const double u = std::log(z);
  if (u < u_lo_ || u > u_hi_) return bessel_k_log(nu_, z);
  const double pos = (u - u_lo_) / h_;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i + 2 > w_.size()) i = w_.size() - 2;
  const double s = pos - static_cast<double>(i);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double w = h00 * w_[i] + h01 * w_[i + 1] + h_ * (h10 * wp_[i] + h11 * wp_[i + 1]);
  return w - z;
}

}  // namespace pathlaw
