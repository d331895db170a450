#pragma once

#include <functional>
#include <memory>
#include <string>

#include "pathlaw/specfun.hpp"

namespace pathlaw {

/// A function h(xi, zeta), invertible in the first variable, together with
/// its first-variable derivative, inverse, and the predicates for its
/// domain D and image of D under (xi, zeta) -> (h(xi, zeta), zeta).
struct HFamily {
  std::function<double(double, double)> eval;
  std::function<double(double, double)> deriv;
  std::function<double(double, double)> inverse;
  std::function<bool(double, double)> in_domain;
  std::function<bool(double, double)> in_image;
  std::string label;
};

/// The built-in catalog. Parameter meaning per kind:
///   LogAffineShift      h = xi - log(1 + a*zeta)          (param = a >= 0)
///   NegLogEmxAffine     h = -log(e^{-xi} + a*zeta)        (param = a >= 0)
///   Translate           h = xi - z                        (param = z)
///   Reflect             h = -xi                           (param unused)
///   LogEmxPlusLinear    h = log(e^{-xi} + 2*x*zeta)       (param = x >= 0)
///   NegLogExPlusLinear  h = -log(e^{xi} + 2*x*zeta)       (param = x >= 0)
enum class HKind {
  LogAffineShift,
  NegLogEmxAffine,
  Translate,
  Reflect,
  LogEmxPlusLinear,
  NegLogExPlusLinear,
};

HFamily builtin_h(HKind kind, double param = 0.0);

/// The family of h^{-1}: eval and inverse swapped, derivative by the inverse
/// rule, domain and image predicates swapped.
HFamily inverse_family(const HFamily& h);

/// exp( (cosh(xi) - cosh(h(xi,zeta))) / zeta ) * |h'(xi,zeta)|, evaluated with
/// a single exponential of the log-space sum.
double girsanov_density(const HFamily& h, double xi, double zeta);
/// The log of the same quantity; the form weight products are accumulated in.
double log_girsanov_density(const HFamily& h, double xi, double zeta);

/// A positive weight Lambda(xi, zeta), possibly depending on the horizon t.
/// log_eval is the primitive so that products stay in log space.
struct WeightLambda {
  std::function<double(double, double)> log_eval;
  double t = 1.0;
  std::string label;

  double eval(double xi, double zeta) const { return std::exp(log_eval(xi, zeta)); }
};

WeightLambda lambda_one(double t);
WeightLambda lambda_exp_mu(double mu, double t);   // exp(mu*xi - mu^2 t / 2)
WeightLambda lambda_cosh_mu(double mu, double t);  // cosh(mu*xi) exp(-mu^2 t / 2)
// K_mu(lam e^xi)/K_mu(lam) * exp(-lam^2/2 e^xi zeta - mu^2 t/2); the log-K
// factor is evaluated through a shared table.
WeightLambda lambda_besselk(double mu, double lam, double t,
                            std::shared_ptr<const BesselKLogTable> table = nullptr);
WeightLambda lambda_time_inhom(double t);          // 2 e^xi zeta / (e^{2t} - 1)

/// Solver state for h_Lambda: the root h of
///   G(h) = W - G(xi),   G(y) = integral_{-X}^{y} Lambda(x,zeta) e^{-cosh(x)/zeta} dx,
/// with W the total window mass. Window half-width X = arccosh(c0*zeta +
/// cosh(xi_ref)), the point where the cosh weight sits c0 e-folds below its
/// value at the query.
struct HLambdaSolver {
  double c0 = 60.0;
  double tol_q = 1e-12;               // relative mass tolerance
  double tol_r = 1e-10;               // root tolerance in xi
  std::size_t min_panels = 128;
  std::size_t max_panels = 1 << 15;
};

double solve_h_lambda(const WeightLambda& lambda, double xi, double zeta,
                      const HLambdaSolver& solver = {});

/// h_Lambda for Lambda = e^{mu x}; any xi-independent factor of Lambda
/// cancels from the defining mass balance and is dropped.
double k_mu(double mu, double xi, double zeta, const HLambdaSolver& solver = {});

/// Numerical check of the integrability condition: the window mass must be
/// stable under window growth at the given zeta.
bool weight_integrability_ok(const WeightLambda& lambda, double zeta,
                             const HLambdaSolver& solver = {});

}  // namespace pathlaw
