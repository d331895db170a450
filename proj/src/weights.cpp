#include "pathlaw/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pathlaw/quad.hpp"

namespace pathlaw {

namespace {

double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

bool zeta_ok(double zeta) { return zeta > 0.0 && std::isfinite(zeta); }

}  // namespace

HFamily builtin_h(HKind kind, double param) {
  HFamily f;
  f.in_domain = [](double, double zeta) { return zeta_ok(zeta); };
  f.in_image = f.in_domain;

  switch (kind) {
    case HKind::LogAffineShift: {
      const double a = param;
      if (a < 0.0) throw std::invalid_argument("builtin_h: alpha must be >= 0");
      f.eval = [a](double xi, double zeta) { return xi - std::log1p(a * zeta); };
      f.deriv = [](double, double) { return 1.0; };
      f.inverse = [a](double xi, double zeta) { return xi + std::log1p(a * zeta); };
      f.label = "h(xi,zeta) = xi - log(1 + a*zeta)";
      break;
    }
    case HKind::NegLogEmxAffine: {
      const double a = param;
      if (a < 0.0) throw std::invalid_argument("builtin_h: alpha must be >= 0");
      f.eval = [a](double xi, double zeta) { return -std::log(std::exp(-xi) + a * zeta); };
      f.deriv = [a](double xi, double zeta) {
        const double e = std::exp(-xi);
        return e / (e + a * zeta);
      };
      f.inverse = [a](double xi, double zeta) { return -std::log(std::exp(-xi) - a * zeta); };
      f.in_image = [a](double xi, double zeta) {
        return zeta_ok(zeta) && 1.0 / (std::exp(xi) * zeta) > a;
      };
      f.label = "h(xi,zeta) = -log(e^-xi + a*zeta)";
      break;
    }
    case HKind::Translate: {
      const double z = param;
      f.eval = [z](double xi, double) { return xi - z; };
      f.deriv = [](double, double) { return 1.0; };
      f.inverse = [z](double xi, double) { return xi + z; };
      f.label = "h(xi,zeta) = xi - z";
      break;
    }
    case HKind::Reflect: {
      f.eval = [](double xi, double) { return -xi; };
      f.deriv = [](double, double) { return -1.0; };
      f.inverse = [](double xi, double) { return -xi; };
      f.label = "h(xi,zeta) = -xi";
      break;
    }
    case HKind::LogEmxPlusLinear: {
      const double x = param;
      if (x < 0.0) throw std::invalid_argument("builtin_h: x must be >= 0");
      f.eval = [x](double xi, double zeta) { return std::log(std::exp(-xi) + 2.0 * x * zeta); };
      f.deriv = [x](double xi, double zeta) {
        const double e = std::exp(-xi);
        return -e / (e + 2.0 * x * zeta);
      };
      f.inverse = [x](double xi, double zeta) { return -std::log(std::exp(xi) - 2.0 * x * zeta); };
      f.in_image = [x](double xi, double zeta) {
        return zeta_ok(zeta) && std::exp(xi) / (2.0 * zeta) > x;
      };
      f.label = "h(xi,zeta) = log(e^-xi + 2x*zeta)";
      break;
    }
    case HKind::NegLogExPlusLinear: {
      const double x = param;
      if (x < 0.0) throw std::invalid_argument("builtin_h: x must be >= 0");
      f.eval = [x](double xi, double zeta) { return -std::log(std::exp(xi) + 2.0 * x * zeta); };
      f.deriv = [x](double xi, double zeta) {
        const double e = std::exp(xi);
        return -e / (e + 2.0 * x * zeta);
      };
      f.inverse = [x](double xi, double zeta) { return std::log(std::exp(-xi) - 2.0 * x * zeta); };
      f.in_image = [x](double xi, double zeta) {
        return zeta_ok(zeta) && 1.0 / (2.0 * std::exp(xi) * zeta) > x;
      };
      f.label = "h(xi,zeta) = -log(e^xi + 2x*zeta)";
      break;
    }
    default:
      throw std::invalid_argument("builtin_h: unknown kind");
  }
  return f;
}

HFamily inverse_family(const HFamily& h) {
  HFamily inv;
  inv.eval = h.inverse;
  inv.inverse = h.eval;
  inv.deriv = [ev = h.inverse, de = h.deriv](double xi, double zeta) {
    return 1.0 / de(ev(xi, zeta), zeta);
  };
  inv.in_domain = h.in_image;
  inv.in_image = h.in_domain;
  inv.label = h.label + " (inverse)";
  return inv;
}

double log_girsanov_density(const HFamily& h, double xi, double zeta) {
  if (!h.in_domain(xi, zeta))
    throw std::domain_error("girsanov_density: (xi, zeta) outside the domain of h");
  const double hx = h.eval(xi, zeta);
  return (std::cosh(xi) - std::cosh(hx)) / zeta + std::log(std::abs(h.deriv(xi, zeta)));
}

double girsanov_density(const HFamily& h, double xi, double zeta) {
  const double expo = log_girsanov_density(h, xi, zeta);
  if (expo > 709.0)
    throw std::range_error("girsanov_density: exponent overflow at xi = " + std::to_string(xi));
  return std::exp(expo);
}

WeightLambda lambda_one(double t) {
  return {[](double, double) { return 0.0; }, t, "Lambda = 1"};
}

WeightLambda lambda_exp_mu(double mu, double t) {
  return {[mu, t](double xi, double) { return mu * xi - 0.5 * mu * mu * t; }, t,
          "Lambda = exp(mu*xi - mu^2 t/2)"};
}

WeightLambda lambda_cosh_mu(double mu, double t) {
  return {[mu, t](double xi, double) { return log_cosh(mu * xi) - 0.5 * mu * mu * t; }, t,
          "Lambda = cosh(mu*xi) exp(-mu^2 t/2)"};
}

WeightLambda lambda_besselk(double mu, double lam, double t,
                            std::shared_ptr<const BesselKLogTable> table) {
  if (!(lam > 0.0)) throw std::invalid_argument("lambda_besselk: lam must be positive");
  if (!table) table = std::make_shared<BesselKLogTable>(mu);
  const double log_k_at_lam = table->log_k(lam);
  auto log_eval = [table, lam, mu, t, log_k_at_lam](double xi, double zeta) {
    const double ex = std::exp(xi);
    return table->log_k(lam * ex) - log_k_at_lam - 0.5 * lam * lam * ex * zeta -
           0.5 * mu * mu * t;
  };
  return {std::move(log_eval), t, "Lambda = K_mu(lam e^xi)/K_mu(lam) exp(-lam^2/2 e^xi zeta - mu^2 t/2)"};
}

WeightLambda lambda_time_inhom(double t) {
  const double log_denom = 2.0 * t + std::log1p(-std::exp(-2.0 * t));
  return {[log_denom](double xi, double zeta) {
            return xi + std::log(2.0 * zeta) - log_denom;
          },
          t, "Lambda = 2 e^xi zeta / (e^{2t} - 1)"};
}

namespace {

// Composite Simpson sweep of the scaled integrand
// exp(log Lambda(x, zeta) - cosh(x)/zeta - scale) over [-X, X], with mass
// accumulated from both ends so that either tail is resolved at full
// precision (a prefix near the total mass cannot represent the far tail).
struct MassSweep {
  double x_lo = 0.0, x_hi = 0.0, panel_w = 0.0, scale = 0.0;
  std::size_t panels = 0;
  std::vector<double> g;    // 2*panels + 1 samples
  std::vector<double> cum;  // prefix mass at panel boundaries, size panels + 1
  std::vector<double> suf;  // suffix mass at panel boundaries, size panels + 1
  double W() const { return cum.back(); }
};

using LogG = std::function<double(double)>;

MassSweep build_sweep(const LogG& logg, double x_lo, double x_hi,
                      const HLambdaSolver& s) {
  MassSweep sw;
  sw.x_lo = x_lo;
  sw.x_hi = x_hi;

  // Scale at the integrand maximum located on a coarse probe grid.
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 128; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / 128.0;
    const double v = logg(x);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("solve_h_lambda: non-finite Lambda value at x = " +
                                  std::to_string(x));
    m = std::max(m, v);
  }
  if (!std::isfinite(m))
    throw std::runtime_error(
        "solve_h_lambda: integrand underflows everywhere in the window; "
        "adjust the window or zeta");
  sw.scale = m;

  auto sample = [&](double x) {
    const double v = logg(x) - m;
    return v < -745.0 ? 0.0 : std::exp(v);
  };

  std::size_t p = s.min_panels;
  std::vector<double> g(2 * p + 1);
  const double span = x_hi - x_lo;
  for (std::size_t j = 0; j < g.size(); ++j)
    g[j] = sample(x_lo + span * static_cast<double>(j) / static_cast<double>(2 * p));

  auto total = [&](const std::vector<double>& gg, std::size_t pp) {
    const double h = span / static_cast<double>(pp);
    double acc = 0.0;
    for (std::size_t i = 0; i < pp; ++i)
      acc += (gg[2 * i] + 4.0 * gg[2 * i + 1] + gg[2 * i + 2]) * (h / 6.0);
    return acc;
  };

  double w = total(g, p);
  while (p < s.max_panels) {
    std::vector<double> g2(4 * p + 1);
    for (std::size_t j = 0; j < g.size(); ++j) g2[2 * j] = g[j];
    for (std::size_t j = 1; j < g2.size(); j += 2)
      g2[j] = sample(x_lo + span * static_cast<double>(j) / static_cast<double>(4 * p));
    g.swap(g2);
    p *= 2;
    const double w2 = total(g, p);
    const bool done = std::abs(w2 - w) <= s.tol_q * std::abs(w2);
    w = w2;
    if (done) break;
  }

  sw.panels = p;
  sw.panel_w = span / static_cast<double>(p);
  sw.g = std::move(g);
  sw.cum.assign(p + 1, 0.0);
  sw.suf.assign(p + 1, 0.0);
  auto panel_mass = [&](std::size_t i) {
    return (sw.g[2 * i] + 4.0 * sw.g[2 * i + 1] + sw.g[2 * i + 2]) * (sw.panel_w / 6.0);
  };
  for (std::size_t i = 0; i < p; ++i) sw.cum[i + 1] = sw.cum[i] + panel_mass(i);
  for (std::size_t i = p; i-- > 0;) sw.suf[i] = sw.suf[i + 1] + panel_mass(i);

  if (!(sw.W() > 0.0) || !std::isfinite(sw.W()))
    throw std::runtime_error("solve_h_lambda: window mass is not positive");
  // The window rule must leave negligible mass in the boundary panels.
  if (sw.cum[1] > 1e-6 * sw.W() || sw.suf[p - 1] > 1e-6 * sw.W())
    throw std::runtime_error(
        "solve_h_lambda: boundary panels carry non-negligible mass; "
        "Lambda may violate the integrability condition at this zeta");
  return sw;
}

double scaled_g(const MassSweep& sw, const LogG& logg, double x) {
  const double v = logg(x) - sw.scale;
  return v < -745.0 ? 0.0 : std::exp(v);
}

std::size_t panel_of(const MassSweep& sw, double y) {
  const double pos = (y - sw.x_lo) / sw.panel_w;
  auto j = static_cast<std::size_t>(std::max(pos, 0.0));
  return std::min(j, sw.panels - 1);
}

double prefix_mass(const MassSweep& sw, const LogG& logg, double y, double tol_abs) {
  if (y <= sw.x_lo) return 0.0;
  if (y >= sw.x_hi) return sw.W();
  const std::size_t j = panel_of(sw, y);
  const double a = sw.x_lo + sw.panel_w * static_cast<double>(j);
  return sw.cum[j] +
         adaptive_simpson([&](double x) { return scaled_g(sw, logg, x); }, a, y, tol_abs);
}

double suffix_mass(const MassSweep& sw, const LogG& logg, double y, double tol_abs) {
  if (y <= sw.x_lo) return sw.suf[0];
  if (y >= sw.x_hi) return 0.0;
  const std::size_t j = panel_of(sw, y);
  const double b = sw.x_lo + sw.panel_w * static_cast<double>(j + 1);
  return sw.suf[j + 1] +
         adaptive_simpson([&](double x) { return scaled_g(sw, logg, x); }, y, b, tol_abs);
}

// Bisection down to 1e-3 followed by Illinois false position on an
// increasing bracket f(a) <= 0 <= f(b).
double refine_root(double a, double b, double fa, double fb, double tol_r,
                   const std::function<double(double)>& f) {
  while (b - a > 1e-3) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm <= 0.0) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  int last_side = 0;
  for (int it = 0; it < 200 && b - a > tol_r; ++it) {
    double y;
    if (fb > fa) {
      y = a - fa * (b - a) / (fb - fa);
      const double margin = 0.01 * (b - a);
      y = std::clamp(y, a + margin, b - margin);
    } else {
      y = 0.5 * (a + b);
    }
    const double fy = f(y);
    if (fy <= 0.0) {
      if (last_side == -1) fb *= 0.5;
      a = y;
      fa = fy;
      last_side = -1;
    } else {
      if (last_side == +1) fa *= 0.5;
      b = y;
      fb = fy;
      last_side = +1;
    }
  }
  return 0.5 * (a + b);
}

double window_half_width(double c0, double zeta, double xi_ref) {
  return std::acosh(c0 * zeta + std::cosh(xi_ref));
}

double solve_pass(const WeightLambda& lambda, double xi, double zeta,
                  const HLambdaSolver& s, double xi_ref) {
  const LogG logg = [&lambda, zeta](double x) {
    return lambda.log_eval(x, zeta) - std::cosh(x) / zeta;
  };
  const double X = window_half_width(s.c0, zeta, xi_ref);
  const MassSweep sw = build_sweep(logg, -X, X, s);
  const double tol_abs = 0.25 * s.tol_q * sw.W();

  // Balanced mass equation: prefix(h) = suffix(xi). Whichever side of the
  // median the root falls on, match the two small masses, each accumulated
  // from its own end of the window.
  const double pxi = prefix_mass(sw, logg, xi, tol_abs);
  const double sxi = suffix_mass(sw, logg, xi, tol_abs);

  if (pxi <= sxi) {
    // root lies right of the median: solve suffix(h) = pxi
    const double target = pxi;
    if (target <= 0.0) return sw.x_hi;
    // suf is decreasing: find panel with suf[j] >= target >= suf[j+1]
    std::size_t lo = 0, hi = sw.panels;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      (sw.suf[mid] >= target ? lo : hi) = mid;
    }
    const double a = sw.x_lo + sw.panel_w * static_cast<double>(lo);
    // increasing in y: target - suffix(y)
    const auto f = [&](double y) { return target - suffix_mass(sw, logg, y, tol_abs); };
    return refine_root(a, a + sw.panel_w, target - sw.suf[lo], target - sw.suf[lo + 1],
                       s.tol_r, f);
  }
  const double target = sxi;
  if (target <= 0.0) return sw.x_lo;
  std::size_t lo = 0, hi = sw.panels;
  while (lo + 1 < hi) {
    const std::size_t mid = (lo + hi) / 2;
    (sw.cum[mid] <= target ? lo : hi) = mid;
  }
  const double a = sw.x_lo + sw.panel_w * static_cast<double>(lo);
  const auto f = [&](double y) { return prefix_mass(sw, logg, y, tol_abs) - target; };
  return refine_root(a, a + sw.panel_w, sw.cum[lo] - target, sw.cum[lo + 1] - target,
                     s.tol_r, f);
}

}  // namespace

double solve_h_lambda(const WeightLambda& lambda, double xi, double zeta,
                      const HLambdaSolver& solver) {
  if (!zeta_ok(zeta)) throw std::invalid_argument("solve_h_lambda: zeta must be positive");
  if (!std::isfinite(xi)) throw std::invalid_argument("solve_h_lambda: xi must be finite");
  const double h0 = solve_pass(lambda, xi, zeta, solver, std::abs(xi));
  if (std::abs(h0) <= std::abs(xi) + 1e-12) return h0;
  // Widen so the window is set by the more extreme of query and root; a
  // self-inverse pair of solves then shares one discretization.
  return solve_pass(lambda, xi, zeta, solver, std::abs(h0));
}

double k_mu(double mu, double xi, double zeta, const HLambdaSolver& solver) {
  WeightLambda lam{[mu](double x, double) { return mu * x; }, 0.0, "Lambda = exp(mu*x)"};
  return solve_h_lambda(lam, xi, zeta, solver);
}

bool weight_integrability_ok(const WeightLambda& lambda, double zeta,
                             const HLambdaSolver& solver) {
  if (!zeta_ok(zeta)) throw std::invalid_argument("weight_integrability_ok: bad zeta");
  const LogG logg = [&lambda, zeta](double x) {
    return lambda.log_eval(x, zeta) - std::cosh(x) / zeta;
  };
  const double X = window_half_width(solver.c0, zeta, 0.0);
  try {
    const MassSweep base = build_sweep(logg, -X, X, solver);
    const MassSweep wide = build_sweep(logg, -X - 2.0, X + 2.0, solver);
    return std::abs(wide.W() * std::exp(wide.scale - base.scale) - base.W()) <=
           1e-6 * base.W();
  } catch (const std::runtime_error&) {
    return false;
  }
}

}  // namespace pathlaw
