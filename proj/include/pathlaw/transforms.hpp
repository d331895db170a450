#pragma once

#include "pathlaw/functionals.hpp"
#include "pathlaw/grid.hpp"
#include "pathlaw/weights.hpp"

namespace pathlaw {

struct TransformResult {
  Path path;
  FunctionalProfile profile;  // Induced mode
};

/// The anticipative transform
///   T_z(phi)(s) = phi_s - log(1 + (A_s/A_t)(e^z - 1)).
/// The returned profile is propagated analytically (Induced):
///   1/A_s' = 1/A_s + (e^z - 1)/A_t, so A_t' = e^{-z} A_t; Z is preserved
/// node-wise and copied. Endpoint is phi_t - z.
TransformResult apply_tz(const Path& path, const FunctionalProfile& profile, double z);

/// T with z = 2 phi_t; endpoint -phi_t; an involution.
TransformResult apply_c(const Path& path, const FunctionalProfile& profile);

/// T with z = phi_t - h_Lambda(phi_t, Z_t); endpoint h_Lambda(phi_t, Z_t);
/// an involution since h_Lambda is self-inverse.
TransformResult apply_c_lambda(const Path& path, const FunctionalProfile& profile,
                               const WeightLambda& lambda,
                               const HLambdaSolver& solver = {});

/// T with z = phi_t + k_mu(phi_t, Z_t); inverse of the -mu transform.
TransformResult apply_s_mu(const Path& path, const FunctionalProfile& profile, double mu,
                           const HLambdaSolver& solver = {});

/// Max node defects of the two composition equivalences, evaluated in
/// Induced mode:
///   (a) T_{log(1 + a A_t(C(phi)))}(C(phi))        vs  T_{log(1 + a e^{-2 phi_t} A_t) + 2 phi_t}(phi)
///   (b) C(T_{log(1 - a A_t)}(phi))                vs  T_{2 phi_t - log(1 - a A_t)}(phi)
/// (b) requires A_t < 1/a and throws std::domain_error otherwise.
struct CompositionDefects {
  double extend_after_c = 0.0;  // (a)
  double c_after_shrink = 0.0;  // (b)
};
CompositionDefects composition_equivalence_check(const Path& path, double alpha);

}  // namespace pathlaw
