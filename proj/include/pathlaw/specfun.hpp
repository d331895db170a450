#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pathlaw {

/// Quadrature configuration for the integral representation
///   K_nu(x) = integral_0^inf exp(-x cosh u) cosh(nu u) du.
/// The cutoff is placed where the integrand has fallen 60 e-folds below its
/// maximum, capped at t_max.
struct BesselEvaluator {
  std::size_t max_panels = 1 << 16;  // node budget for panel doubling
  double t_max = 60.0;               // hard cap on the cutoff in u
  double rel_tol = 1e-10;
};

/// log K_nu(x). The log-scaled evaluator is the primitive; plain values are
/// exponentiations of it. nu is mapped to |nu| (K_nu = K_|nu|).
double bessel_k_log(double nu, double x, const BesselEvaluator& ev = {});

/// K_nu(x). Throws std::range_error directing to bessel_k_log when the
/// result would underflow (x very large).
double bessel_k(double nu, double x, const BesselEvaluator& ev = {});

/// K_{mu+1}(z) / K_mu(z), computed as a difference of log integrals and a
/// single exponentiation.
double bessel_k_ratio(double mu, double z, const BesselEvaluator& ev = {});

/// exp(-cosh(xi)/zeta) / (2 K_0(1/zeta)); integrates to 1 over the real line.
double conditional_density(double xi, double zeta, const BesselEvaluator& ev = {});

/// Tabulated log K_nu on a log-argument grid, cubic Hermite interpolation of
/// the slowly varying w(u) = log K_nu(e^u) + e^u. Falls back to direct
/// quadrature outside the tabulated range. Immutable after construction.
class BesselKLogTable {
 public:
  explicit BesselKLogTable(double nu, double u_lo = -40.0, double u_hi = 12.0,
                           std::size_t n_nodes = 2081);
  double log_k(double z) const;
  double nu() const { return nu_; }

 private:
  double nu_, u_lo_, u_hi_, h_;
  std::vector<double> w_, wp_;
};

/// Two log-K tables giving K_{mu+1}(z)/K_mu(z) cheaply along SDE trajectories.
class BesselKRatioTable {
 public:
  explicit BesselKRatioTable(double mu)
      : lo_(std::abs(mu)), hi_(std::abs(mu + 1.0)) {}
  double ratio(double z) const { return std::exp(hi_.log_k(z) - lo_.log_k(z)); }
  double log_k_mu(double z) const { return lo_.log_k(z); }

 private:
  BesselKLogTable lo_, hi_;
};

}  // namespace pathlaw
