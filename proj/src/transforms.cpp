#include "pathlaw/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pathlaw {

TransformResult apply_tz(const Path& path, const FunctionalProfile& profile, double z) {
  const std::size_t n = path.grid.n_steps;
  if (profile.A.size() != n + 1)
    throw std::invalid_argument("apply_tz: profile does not belong to this path");
  const double a_end = profile.A[n];
  if (!(a_end > 0.0)) throw std::invalid_argument("apply_tz: A_t must be positive");

  const double em1 = std::expm1(z);
  std::vector<double> values(n + 1);
  FunctionalProfile out;
  out.mode = ProfileMode::Induced;
  out.A.resize(n + 1);
  out.Z = profile.Z;  // Z is preserved node-wise

  values[0] = path.values[0];
  out.A[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double r = profile.A[k] / a_end;
    const double arg = r * em1;
    if (arg <= -1.0)
      throw std::runtime_error("apply_tz: internal numeric fault, log argument <= 0 at node " +
                               std::to_string(k));
    values[k] = path.values[k] - std::log1p(arg);
    out.A[k] = profile.A[k] / (1.0 + arg);
  }
  return {Path(path.grid, std::move(values)), std::move(out)};
}

TransformResult apply_c(const Path& path, const FunctionalProfile& profile) {
  return apply_tz(path, profile, 2.0 * path.endpoint());
}

TransformResult apply_c_lambda(const Path& path, const FunctionalProfile& profile,
                               const WeightLambda& lambda, const HLambdaSolver& solver) {
  const auto [xi, zeta] = path_endpoint_state(path, profile);
  const double h = solve_h_lambda(lambda, xi, zeta, solver);
  return apply_tz(path, profile, xi - h);
}

TransformResult apply_s_mu(const Path& path, const FunctionalProfile& profile, double mu,
                           const HLambdaSolver& solver) {
  const auto [xi, zeta] = path_endpoint_state(path, profile);
  return apply_tz(path, profile, xi + k_mu(mu, xi, zeta, solver));
}

namespace {

double max_node_diff(const Path& a, const Path& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.n_nodes(); ++k)
    m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace

CompositionDefects composition_equivalence_check(const Path& path, double alpha) {
  if (alpha < 0.0)
    throw std::invalid_argument("composition_equivalence_check: alpha must be >= 0");
  const FunctionalProfile prof = exp_functional_A(path);
  const double phi_t = path.endpoint();
  const double a_t = prof.a_end();

  CompositionDefects out;

  // (a) applying the log(1 + a A_t)-shift after C collapses to one T.
  {
    const auto c = apply_c(path, prof);
    const double z_outer = std::log1p(alpha * c.profile.a_end());
    const auto lhs = apply_tz(c.path, c.profile, z_outer);
    const double z_direct = std::log1p(alpha * std::exp(-2.0 * phi_t) * a_t) + 2.0 * phi_t;
    const auto rhs = apply_tz(path, prof, z_direct);
    out.extend_after_c = max_node_diff(lhs.path, rhs.path);
  }

  // (b) C after the log(1 - a A_t)-shift, defined only when A_t < 1/a.
  {
    if (alpha > 0.0 && !(a_t < 1.0 / alpha))
      throw std::domain_error("composition_equivalence_check: requires A_t < 1/alpha");
    const double z_inner = std::log1p(-alpha * a_t);
    const auto shrunk = apply_tz(path, prof, z_inner);
    const auto lhs = apply_c(shrunk.path, shrunk.profile);
    const auto rhs = apply_tz(path, prof, 2.0 * phi_t - z_inner);
    out.c_after_shrink = max_node_diff(lhs.path, rhs.path);
  }
  return out;
}

}  // namespace pathlaw
