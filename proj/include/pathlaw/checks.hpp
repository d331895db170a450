#pragma once

#include <span>
#include <string>
#include <vector>

#include "pathlaw/grid.hpp"
#include "pathlaw/rng.hpp"
#include "pathlaw/weights.hpp"

namespace pathlaw {

/// Max node defects of the transform algebra over sampled Brownian paths,
/// Induced profiles except where noted:
///   semigroup      T_z(T_z') vs T_{z+z'}
///   inverse        T_{-z}(T_z) vs id
///   endpoint       T_z endpoint vs phi_t - z
///   a_scaling      A_t(T_z) vs e^{-z} A_t        (relative)
///   z_preserve     exp(-psi) A_ind vs input Z    (relative)
///   time_reversal  R(T_z) vs T_{-z}(R)           (Quadrature profiles)
struct AlgebraDefects {
  double semigroup = 0.0, inverse = 0.0, endpoint = 0.0;
  double a_scaling = 0.0, z_preserve = 0.0, time_reversal = 0.0;
  double worst() const;
};
AlgebraDefects transform_algebra_check(const TimeGrid& grid, const RngSpec& rng,
                                       int n_paths, std::span<const double> shifts);

/// Involution defects: C o C, C_Lambda o C_Lambda for each weight, and
/// S_mu o S_{-mu}, measured as max node distance from the input path.
struct InvolutionDefect {
  std::string label;
  double defect = 0.0;
};
std::vector<InvolutionDefect> involution_check(const TimeGrid& grid, const RngSpec& rng,
                                               int n_paths,
                                               const std::vector<WeightLambda>& lambdas,
                                               double mu, const HLambdaSolver& solver);

/// Composition equivalences over sampled paths; the shrink identity is only
/// evaluated where A_t < 1/alpha, and the count is reported.
struct CompositionSummary {
  double max_extend = 0.0, max_collapse = 0.0;
  int n_collapse_checked = 0;
};
CompositionSummary composition_check_over_paths(const TimeGrid& grid, const RngSpec& rng,
                                                int n_paths, double alpha);

/// Median ratio defect(n) / defect(2n) of the Quadrature-mode semigroup
/// identity over smooth test paths (profiles recomputed by trapezoid after
/// each transform). Second-order quadrature puts the ratio near 4.
double quadrature_semigroup_ratio(double t_end, std::size_t n_coarse, int n_paths,
                                  const RngSpec& rng, double z1, double z2);

}  // namespace pathlaw
