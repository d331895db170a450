#include "pathlaw/quad.hpp"

namespace pathlaw {

namespace {

double simpson_slice(double h, double fa, double fm, double fb) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_slice(m - a, fa, flm, fm);
  const double right = simpson_slice(b - m, fm, frm, fb);
  const double err = (left + right - whole) / 15.0;
  if (depth <= 0 || std::abs(err) <= tol) return left + right + err;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson_slice(b - a, fa, fm, fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

double composite_simpson(const std::function<double(double)>& f, double a, double b,
                         std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double acc = 0.0;
  double f0 = f(a);
  for (std::size_t i = 0; i < panels; ++i) {
    const double x0 = a + h * static_cast<double>(i);
    const double fm = f(x0 + 0.5 * h);
    const double f1 = (i + 1 == panels) ? f(b) : f(x0 + h);
    acc += (f0 + 4.0 * fm + f1) * (h / 6.0);
    f0 = f1;
  }
  return acc;
}

}  // namespace pathlaw
