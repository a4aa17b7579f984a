#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the library: Bessel values come from the standard library and integrals
// from a fixed composite Simpson rule.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace oracle {

inline double j0(double x) { return std::cyl_bessel_j(0.0, x); }
inline double j1(double x) { return std::cyl_bessel_j(1.0, x); }

inline constexpr double kJ00 = 2.404825557695772768621631879;

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  if (flo * f(hi) > 0.0) throw std::runtime_error("oracle bisection: no sign change");
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Disk solution for eigenvalue lam and stiffness m, built from the slope
// matching condition with std::cyl_bessel_j.
struct Disk {
  double lam = 0.0;
  double m = 0.0;
  double a = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  double mass = 0.0;

  Disk(double lambda1, double stiffness) : lam(lambda1), m(stiffness) {
    const double k = std::sqrt(lam);
    const auto slope_gap = [&](double r) { return (1.0 - r) * k * j1(k * r) - j0(k * r); };
    a = bisect(slope_gap, 1e-9, kJ00 / k * (1.0 - 1e-12));
    c1 = (1.0 - a) / j0(k * a);
    c0 = a * (1.0 + lam * a * a / 3.0 - lam * a / 2.0);
    mass = 2.0 * std::numbers::pi * simpson([&](double r) { return theta(r) * r; }, a, 1.0);
  }

  double theta(double r) const {
    if (r < a) return 0.0;
    return (-lam * r * r / 3.0 + lam * r / 2.0 - 1.0 + c0 / r) / m;
  }
  double u(double r) const { return r < a ? c1 * j0(std::sqrt(lam) * r) : 1.0 - r; }
};

}  // namespace oracle
