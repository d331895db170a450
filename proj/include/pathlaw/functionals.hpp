#pragma once

#include <utility>

#include "pathlaw/grid.hpp"

namespace pathlaw {

enum class ProfileMode { Quadrature, Induced };

/// The exponential functionals attached to a path:
///   A_s = integral of exp(2 phi) over [0, s]   (composite trapezoid)
///   Z_s = exp(-phi_s) * A_s
/// A[0] = 0 is stored explicitly. Z[0] is stored as 0 by convention and is
/// never read by any operation.
struct FunctionalProfile {
  std::vector<double> A;
  std::vector<double> Z;
  ProfileMode mode = ProfileMode::Quadrature;

  double a_end() const { return A.back(); }
  double z_end() const { return Z.back(); }
};

/// Composite-trapezoid A and Z profiles of a path. Throws std::range_error
/// naming the offending node if any |2 phi_k| exceeds 700.
FunctionalProfile exp_functional_A(const Path& path);

/// R(phi)(s) = phi_{t-s} - phi_t. Involution on the shared grid.
Path time_reverse(const Path& path);

/// (phi_t, Z_t) of a path with its computed profile.
std::pair<double, double> path_endpoint_state(const Path& path,
                                              const FunctionalProfile& profile);

}  // namespace pathlaw
