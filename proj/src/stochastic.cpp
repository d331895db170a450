#include "pathlaw/stochastic.hpp"

#include <cmath>
#include <stdexcept>

namespace pathlaw {

Path sample_bm(const TimeGrid& grid, const RngSpec& rng, std::uint64_t ordinal) {
  NormalStream stream(rng.master_seed, ordinal);
  const double sd = std::sqrt(grid.dt());
  std::vector<double> v(grid.n_nodes());
  v[0] = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) v[k] = v[k - 1] + sd * stream.next();
  return Path(grid, std::move(v));
}

Path sample_bm_drift(double mu, const TimeGrid& grid, const RngSpec& rng,
                     std::uint64_t ordinal) {
  Path p = sample_bm(grid, rng, ordinal);
  std::vector<double> v = p.values;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += mu * grid.node(k);
  return Path(grid, std::move(v));
}

Path euler_maruyama(const DriftSpec& drift, const TimeGrid& grid, const RngSpec& rng,
                    std::uint64_t ordinal) {
  using Kind = DriftSpec::Kind;
  if (drift.kind == Kind::Zero) return sample_bm(grid, rng, ordinal);
  if (drift.kind == Kind::Constant) return sample_bm_drift(drift.mu, grid, rng, ordinal);
  if (drift.kind == Kind::BesselK && !drift.ratio_table)
    throw std::invalid_argument("euler_maruyama: BesselK drift needs a ratio table");

  NormalStream stream(rng.master_seed, ordinal);
  const double ds = grid.dt();
  const double sd = std::sqrt(ds);
  const double t = grid.t_end;

  std::vector<double> v(grid.n_nodes());
  v[0] = 0.0;
  double run_a = 0.0;  // trapezoid of e^{2X} up to the current node
  double prev_e2x = 1.0;

  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double s = grid.node(k);
    const double x = v[k];
    double b = 0.0;
    switch (drift.kind) {
      case Kind::Tanh:
        b = drift.mu * std::tanh(drift.mu * x);
        break;
      case Kind::BesselK: {
        const double z = drift.lambda * std::exp(x);
        if (!(z > 0.0) || !std::isfinite(z))
          throw std::runtime_error("euler_maruyama: BesselK drift failed at step " +
                                   std::to_string(k) + " (x = " + std::to_string(x) + ")");
        b = drift.mu - z * drift.ratio_table->ratio(z);
        break;
      }
      case Kind::TimeInhom: {
        const double q = std::expm1(2.0 * (t - s)) * std::exp(2.0 * x);
        b = 2.0 * q / (2.0 * run_a + q);
        break;
      }
      default:
        break;
    }
    if (!std::isfinite(b))
      throw std::runtime_error("euler_maruyama: drift evaluation failed at step " +
                               std::to_string(k));
    v[k + 1] = x + b * ds + sd * stream.next();
    const double e2x = std::exp(2.0 * v[k + 1]);
    run_a += 0.5 * ds * (prev_e2x + e2x);
    prev_e2x = e2x;
  }
  return Path(grid, std::move(v));
}

}  // namespace pathlaw
