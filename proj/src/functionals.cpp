#include "pathlaw/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pathlaw {

FunctionalProfile exp_functional_A(const Path& path) {
  const std::size_t n = path.grid.n_steps;
  const double ds = path.grid.dt();

  FunctionalProfile out;
  out.mode = ProfileMode::Quadrature;
  out.A.resize(n + 1);
  out.Z.resize(n + 1);

  for (std::size_t k = 0; k <= n; ++k) {
    if (std::abs(2.0 * path.values[k]) > 700.0)
      throw std::range_error("exp_functional_A: |2*phi| > 700 at node " + std::to_string(k) +
                             " (phi = " + std::to_string(path.values[k]) + ")");
  }

  double prev = std::exp(2.0 * path.values[0]);
  out.A[0] = 0.0;
  out.Z[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double cur = std::exp(2.0 * path.values[k]);
    acc += 0.5 * ds * (prev + cur);
    out.A[k] = acc;
    out.Z[k] = std::exp(-path.values[k]) * acc;
    prev = cur;
  }
  return out;
}

Path time_reverse(const Path& path) {
  const std::size_t n = path.grid.n_steps;
  const double end = path.values[n];
  std::vector<double> rev(n + 1);
  for (std::size_t k = 0; k <= n; ++k) rev[k] = path.values[n - k] - end;
  return Path(path.grid, std::move(rev));
}

std::pair<double, double> path_endpoint_state(const Path& path,
                                              const FunctionalProfile& profile) {
  if (profile.A.size() != path.n_nodes())
    throw std::invalid_argument("path_endpoint_state: profile does not belong to this path");
  return {path.values.back(), profile.Z.back()};
}

}  // namespace pathlaw
