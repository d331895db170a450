#pragma once

#include <memory>

#include "pathlaw/functionals.hpp"
#include "pathlaw/grid.hpp"
#include "pathlaw/rng.hpp"
#include "pathlaw/specfun.hpp"

namespace pathlaw {

/// Drift b(s, x, A_s) for the Euler-Maruyama sampler (unit diffusion):
///   Zero       0
///   Constant   mu
///   Tanh       mu * tanh(mu x)
///   BesselK    mu - lam e^x K_{mu+1}(lam e^x) / K_mu(lam e^x)
///   TimeInhom  2 q / (2 A_s + q),  q = (e^{2(t-s)} - 1) e^{2x}
/// TimeInhom reads the horizon from the grid; A_s is the running trapezoid
/// of e^{2X} along the simulated trajectory.
struct DriftSpec {
  enum class Kind { Zero, Constant, Tanh, BesselK, TimeInhom };

  Kind kind = Kind::Zero;
  double mu = 0.0;
  double lambda = 1.0;
  std::shared_ptr<const BesselKRatioTable> ratio_table;

  static DriftSpec zero() { return {}; }
  static DriftSpec constant(double mu) { return {Kind::Constant, mu, 1.0, nullptr}; }
  static DriftSpec tanh_drift(double mu) { return {Kind::Tanh, mu, 1.0, nullptr}; }
  static DriftSpec besselk(double mu, double lam) {
    return {Kind::BesselK, mu, lam, std::make_shared<BesselKRatioTable>(mu)};
  }
  static DriftSpec time_inhom() { return {Kind::TimeInhom, 0.0, 1.0, nullptr}; }
};

/// Standard Brownian path: values[0] = 0, increments N(0, ds), fully
/// determined by (seed, ordinal).
Path sample_bm(const TimeGrid& grid, const RngSpec& rng, std::uint64_t ordinal);

/// Brownian motion with drift mu. Shares the underlying increments with
/// sample_bm at the same ordinal: drifted - driftless == mu * s_k exactly.
Path sample_bm_drift(double mu, const TimeGrid& grid, const RngSpec& rng,
                     std::uint64_t ordinal);

/// Euler-Maruyama with unit diffusion on the shared grid, X_0 = 0.
Path euler_maruyama(const DriftSpec& drift, const TimeGrid& grid, const RngSpec& rng,
                    std::uint64_t ordinal);

}  // namespace pathlaw
