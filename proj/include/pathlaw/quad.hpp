#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace pathlaw {

/// Adaptive Simpson on [a, b] to absolute tolerance tol. The classic
/// recursion with the 1/15 error estimate; depth-capped.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// Composite Simpson with 2*panels+1 equispaced samples.
double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         std::size_t panels);

}  // namespace pathlaw
