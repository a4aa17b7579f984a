#include "membrane/quadrature.hpp"

#include <cmath>

namespace membrane {

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double refine(const std::function<double(double)>& f, const Panel& s, double tol, int depth) {
  const double m = 0.5 * (s.a + s.b);
  const double lm = 0.5 * (s.a + m);
  const double rm = 0.5 * (m + s.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - s.a) / 6.0 * (s.fa + 4.0 * flm + s.fm);
  const double right = (s.b - m) / 6.0 * (s.fm + 4.0 * frm + s.fb);
  const double diff = left + right - s.whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return refine(f, {s.a, m, s.fa, flm, s.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {m, s.b, s.fm, frm, s.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return refine(f, {a, b, fa, fm, fb, whole}, tol, max_depth);
}

}  // namespace membrane
