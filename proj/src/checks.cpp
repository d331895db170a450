#include "pathlaw/checks.hpp"

#include <algorithm>
#include <cmath>

#include "pathlaw/stochastic.hpp"
#include "pathlaw/transforms.hpp"

namespace pathlaw {

namespace {

double max_node_diff(const Path& a, const Path& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.n_nodes(); ++k)
    m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace

double AlgebraDefects::worst() const {
  return std::max({semigroup, inverse, endpoint, a_scaling, z_preserve, time_reversal});
}

AlgebraDefects transform_algebra_check(const TimeGrid& grid, const RngSpec& rng,
                                       int n_paths, std::span<const double> shifts) {
  AlgebraDefects d;
  for (int i = 0; i < n_paths; ++i) {
    const Path b = sample_bm(grid, rng, static_cast<std::uint64_t>(i));
    const FunctionalProfile prof = exp_functional_A(b);
    const Path rb = time_reverse(b);
    const FunctionalProfile rprof = exp_functional_A(rb);

    for (double z : shifts) {
      const auto tz = apply_tz(b, prof, z);

      d.endpoint = std::max(d.endpoint, std::abs(tz.path.endpoint() - (b.endpoint() - z)));
      const double want_a = std::exp(-z) * prof.a_end();
      d.a_scaling = std::max(d.a_scaling, std::abs(tz.profile.a_end() - want_a) / want_a);

      for (std::size_t k = 1; k < b.n_nodes(); ++k) {
        const double recon = std::exp(-tz.path.values[k]) * tz.profile.A[k];
        d.z_preserve = std::max(d.z_preserve, std::abs(recon - prof.Z[k]) /
                                                  std::max(1.0, std::abs(prof.Z[k])));
      }

      const auto back = apply_tz(tz.path, tz.profile, -z);
      d.inverse = std::max(d.inverse, max_node_diff(back.path, b));

      const Path rev_then = apply_tz(rb, rprof, -z).path;
      d.time_reversal = std::max(d.time_reversal,
                                 max_node_diff(time_reverse(tz.path), rev_then));

      for (double z2 : shifts) {
        const auto two = apply_tz(tz.path, tz.profile, z2);
        const auto direct = apply_tz(b, prof, z + z2);
        d.semigroup = std::max(d.semigroup, max_node_diff(two.path, direct.path));
      }
    }
  }
  return d;
}

std::vector<InvolutionDefect> involution_check(const TimeGrid& grid, const RngSpec& rng,
                                               int n_paths,
                                               const std::vector<WeightLambda>& lambdas,
                                               double mu, const HLambdaSolver& solver) {
  std::vector<InvolutionDefect> out;
  out.push_back({"C o C", 0.0});
  for (const auto& lam : lambdas) out.push_back({"C_Lambda o C_Lambda [" + lam.label + "]", 0.0});
  out.push_back({"S_mu o S_{-mu}", 0.0});

  for (int i = 0; i < n_paths; ++i) {
    const Path b = sample_bm(grid, rng, static_cast<std::uint64_t>(i));
    const FunctionalProfile prof = exp_functional_A(b);

    {
      const auto once = apply_c(b, prof);
      const auto twice = apply_c(once.path, once.profile);
      out[0].defect = std::max(out[0].defect, max_node_diff(twice.path, b));
    }
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const auto once = apply_c_lambda(b, prof, lambdas[l], solver);
      const auto twice = apply_c_lambda(once.path, once.profile, lambdas[l], solver);
      out[1 + l].defect = std::max(out[1 + l].defect, max_node_diff(twice.path, b));
    }
    {
      const auto once = apply_s_mu(b, prof, -mu, solver);
      const auto twice = apply_s_mu(once.path, once.profile, mu, solver);
      out.back().defect = std::max(out.back().defect, max_node_diff(twice.path, b));
    }
  }
  return out;
}

CompositionSummary composition_check_over_paths(const TimeGrid& grid, const RngSpec& rng,
                                                int n_paths, double alpha) {
  CompositionSummary s;
  for (int i = 0; i < n_paths; ++i) {
    const Path b = sample_bm(grid, rng, static_cast<std::uint64_t>(i));
    const FunctionalProfile prof = exp_functional_A(b);
    if (alpha > 0.0 && !(prof.a_end() < 1.0 / alpha)) {
      // only the extend identity is defined here
      const auto c = apply_c(b, prof);
      const double z_outer = std::log1p(alpha * c.profile.a_end());
      const auto lhs = apply_tz(c.path, c.profile, z_outer);
      const double z_direct =
          std::log1p(alpha * std::exp(-2.0 * b.endpoint()) * prof.a_end()) + 2.0 * b.endpoint();
      const auto rhs = apply_tz(b, prof, z_direct);
      s.max_extend = std::max(s.max_extend, max_node_diff(lhs.path, rhs.path));
      continue;
    }
    const auto defects = composition_equivalence_check(b, alpha);
    s.max_extend = std::max(s.max_extend, defects.extend_after_c);
    s.max_collapse = std::max(s.max_collapse, defects.c_after_shrink);
    ++s.n_collapse_checked;
  }
  return s;
}

namespace {

// Smooth deterministic test path evaluated exactly on any grid, so the same
// function can be sampled at n and 2n nodes.
Path smooth_path(const TimeGrid& grid, const RngSpec& rng, std::uint64_t ordinal) {
  NormalStream coef(rng.master_seed, ordinal + (1ull << 40));
  const double a = 0.5 * coef.next(), b = 0.5 * coef.next();
  const double c = 0.5 * coef.next(), d = 0.5 * coef.next();
  std::vector<double> v(grid.n_nodes());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double u = grid.node(k) / grid.t_end;
    v[k] = a * std::sin(2.0 * M_PI * u) + b * u + c * u * u + d * std::cos(M_PI * u);
  }
  return Path(grid, std::move(v));
}

double quad_semigroup_defect(const Path& p, double z1, double z2) {
  const FunctionalProfile prof = exp_functional_A(p);
  const Path first = apply_tz(p, prof, z1).path;
  const FunctionalProfile re = exp_functional_A(first);  // Quadrature mode
  const Path second = apply_tz(first, re, z2).path;
  const Path direct = apply_tz(p, prof, z1 + z2).path;
  double m = 0.0;
  for (std::size_t k = 0; k < p.n_nodes(); ++k)
    m = std::max(m, std::abs(second.values[k] - direct.values[k]));
  return m;
}

}  // namespace

double quadrature_semigroup_ratio(double t_end, std::size_t n_coarse, int n_paths,
                                  const RngSpec& rng, double z1, double z2) {
  const TimeGrid coarse(t_end, n_coarse);
  const TimeGrid fine(t_end, 2 * n_coarse);
  std::vector<double> ratios;
  for (int i = 0; i < n_paths; ++i) {
    const double dc = quad_semigroup_defect(smooth_path(coarse, rng, i), z1, z2);
    const double df = quad_semigroup_defect(smooth_path(fine, rng, i), z1, z2);
    if (df > 0.0) ratios.push_back(dc / df);
  }
  std::sort(ratios.begin(), ratios.end());
  return ratios.empty() ? 0.0 : ratios[ratios.size() / 2];
}

}  // namespace pathlaw
