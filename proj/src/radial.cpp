#include "membrane/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "membrane/errors.hpp"
#include "membrane/quadrature.hpp"
#include "membrane/specfun.hpp"

namespace membrane::radial {

namespace {

using specfun::bessel_j0;
using specfun::bessel_j1;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// First maximum of J1.
constexpr double kJ1ArgMax = 1.8411837813406593;
constexpr double kQuadratureTol = 1e-12;

void check_radius(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("radius must lie in [0, 1], got " + std::to_string(r));
  }
}

double normalization_scale(const RadialOptimum& opt, Normalization norm) {
  return norm == Normalization::kUnitL2 ? 1.0 / std::sqrt(u_l2_norm_squared(opt)) : 1.0;
}

double bessel_core_max_slope(double a, double sqrt_lambda, double c1) {
  const double x = std::min(a * sqrt_lambda, kJ1ArgMax);
  return std::fabs(c1 * sqrt_lambda * bessel_j1(x));
}

}  // namespace

RadialOptimum make_optimum(double lambda1, double m, double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("transition radius must lie in (0, 1)");
  if (!(m > 0.0)) throw std::invalid_argument("stiffness m must be positive");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda1 must be positive");
  const double j0 = bessel_j0(a * std::sqrt(lambda1));
  if (j0 == 0.0) throw std::invalid_argument("J0(a sqrt(lambda1)) vanishes");
  RadialOptimum opt;
  opt.lambda1 = lambda1;
  opt.m = m;
  opt.a_bar = a;
  opt.c1 = (1.0 - a) / j0;
  opt.c0 = a * (1.0 + lambda1 * a * a / 3.0 - lambda1 * a / 2.0);
  opt.mass_L = mass_from_a(a, m, lambda1);
  return opt;
}

double theta_profile(double r, const RadialOptimum& opt) {
  check_radius(r);
  if (r <= opt.a_bar) return 0.0;
  const double l = opt.lambda1;
  return (-l * r * r / 3.0 + l * r / 2.0 - 1.0 + opt.c0 / r) / opt.m;
}

double u_profile(double r, const RadialOptimum& opt, Normalization norm) {
  check_radius(r);
  const double scale = normalization_scale(opt, norm);
  if (r < opt.a_bar) return scale * opt.c1 * bessel_j0(std::sqrt(opt.lambda1) * r);
  return scale * (1.0 - r);
}

double u_prime(double r, const RadialOptimum& opt, Normalization norm) {
  check_radius(r);
  const double scale = normalization_scale(opt, norm);
  const double k = std::sqrt(opt.lambda1);
  if (r < opt.a_bar) return -scale * opt.c1 * k * bessel_j1(k * r);
  return -scale;
}

double u_l2_norm_squared(const RadialOptimum& opt) {
  const double k = std::sqrt(opt.lambda1);
  const double a = opt.a_bar;
  const double core = adaptive_simpson(
      [k](double r) {
        const double j = bessel_j0(k * r);
        return r * j * j;
      },
      0.0, a, kQuadratureTol);
  // int_a^1 r (1-r)^2 dr in closed form.
  const double b = 1.0 - a;
  const double tail = b * b * b * (1.0 + 3.0 * a) / 12.0;
  return kTwoPi * (opt.c1 * opt.c1 * core + tail);
}

double lambda_from_a(double a, double m, double mass_L) {
  if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("transition radius must lie in (0, 1)");
  if (!(m > 0.0)) throw std::invalid_argument("stiffness m must be positive");
  if (!(mass_L >= 0.0)) throw std::invalid_argument("mass L must be nonnegative");
  const double b = 1.0 - a;
  const double denominator = b * b * b * (1.0 + 3.0 * a);
  if (!(denominator > 0.0) || !std::isfinite(denominator)) {
    throw std::out_of_range("lambda_from_a: transition radius too close to 1");
  }
  return 12.0 * (m * mass_L / kTwoPi + 0.5 * b * b) / denominator;
}

double mass_from_a(double a, double m, double lambda1) {
  const double b = 1.0 - a;
  const double denominator = b * b * b * (1.0 + 3.0 * a);
  return kTwoPi / m * (lambda1 * denominator / 12.0 - 0.5 * b * b);
}

double smooth_fit_residual(double a, double lambda1) {
  if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda1 must be positive");
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("transition radius must lie in [0, 1]");
  const double k = std::sqrt(lambda1);
  const double j0 = bessel_j0(a * k);
  if (j0 == 0.0) throw std::domain_error("smooth_fit_residual: J0(a sqrt(lambda1)) = 0 (singular)");
  return (1.0 - a) * k * bessel_j1(a * k) / j0 - 1.0;
}

double radial_rayleigh(double a, double lambda1, double m, double mass_L,
                       AmplitudeReading reading) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("transition radius must lie in (0, 1)");
  const double k = std::sqrt(lambda1);
  const double j0 = bessel_j0(a * k);
  if (j0 == 0.0) throw std::domain_error("radial_rayleigh: J0(a sqrt(lambda1)) = 0 (singular)");
  const double c1 = (1.0 - a) / j0;
  double gradient_amplitude = c1;
  if (reading == AmplitudeReading::kPrintedJ1) {
    const double j1 = bessel_j1(a * k);
    if (j1 == 0.0) throw std::domain_error("radial_rayleigh: J1(a sqrt(lambda1)) = 0 (singular)");
    gradient_amplitude = (1.0 - a) / j1;
  }

  const double core_gradient = adaptive_simpson(
      [k](double r) {
        const double j = bessel_j1(k * r);
        return r * j * j;
      },
      0.0, a, kQuadratureTol);
  const double core_value = adaptive_simpson(
      [k](double r) {
        const double j = bessel_j0(k * r);
        return r * j * j;
      },
      0.0, a, kQuadratureTol);
  const double tail_value = adaptive_simpson(
      [](double r) { return r * (1.0 - r) * (1.0 - r); }, a, 1.0, kQuadratureTol);

  const double sup_slope = std::max(1.0, bessel_core_max_slope(a, k, c1));
  const double ka = k * gradient_amplitude;
  const double numerator = ka * ka * core_gradient + 0.5 * (1.0 - a * a) +
                           m * mass_L / kTwoPi * sup_slope * sup_slope;
  const double denominator = c1 * c1 * core_value + tail_value;
  return numerator / denominator;
}

double rayleigh_minimizer(double lambda1, double m, double mass_L, AmplitudeReading reading,
                          int grid_points) {
  const double pole = specfun::first_j0_zero() / std::sqrt(lambda1);
  const double hi = std::min(1.0, pole) * (1.0 - 1e-6);
  const double lo = hi * 1e-4;
  const auto f = [&](double a) { return radial_rayleigh(a, lambda1, m, mass_L, reading); };

  const int n = std::max(grid_points, 10);
  const double step = (hi - lo) / (n - 1);
  int best = 0;
  double best_value = f(lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(lo + i * step);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double left = lo + std::max(best - 1, 0) * step;
  double right = lo + std::min(best + 1, n - 1) * step;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double f1 = f(x1);
  double f2 = f(x2);
  while (right - left > 1e-10) {
    if (f1 <= f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = f(x1);
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = f(x2);
    }
  }
  return 0.5 * (left + right);
}

double theta_peak(const RadialOptimum& opt) {
  // m theta'(r) = -2 lambda r/3 + lambda/2 - c0/r^2; multiply by r^2.
  const double l = opt.lambda1;
  const auto slope = [&](double r) { return -2.0 * l * r * r * r / 3.0 + l * r * r / 2.0 - opt.c0; };
  double lo = opt.a_bar;
  double hi = 1.0;
  if (slope(hi) >= 0.0) return 1.0;
  if (slope(lo) <= 0.0) return opt.a_bar;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RadialOptimum solve_radial(double lambda1, double m) {
  const double j00 = specfun::first_j0_zero();
  if (!std::isfinite(lambda1) || lambda1 <= j00 * j00) {
    throw std::domain_error("lambda not admissible (≤ j00²)");
  }
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("stiffness m must be positive");

  // The residual is -1 at a = 0 and has a pole at the first zero of
  // J0(a sqrt(lambda1)), which lies inside (0,1) for lambda1 > j00^2.
  const double pole = j00 / std::sqrt(lambda1);
  double lo = pole * 1e-6;
  double hi = std::min(pole * (1.0 - 1e-12), 1.0 - 1e-12);
  double f_lo = smooth_fit_residual(lo, lambda1);
  const double f_hi = smooth_fit_residual(hi, lambda1);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw NumericalFailure("solve_radial: smooth-fit residual has no sign change on the bracket");
  }
  for (int i = 0; i < 300 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = smooth_fit_residual(mid, lambda1);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double a = 0.5 * (lo + hi);

  RadialOptimum opt = make_optimum(lambda1, m, a);
  if (opt.mass_L < 0.0 || theta_profile(1.0, opt) < 0.0) {
    throw std::domain_error(
        "lambda below the radial reinforcement threshold: the closed-form density is negative "
        "near the boundary");
  }
  opt.r_peak = theta_peak(opt);
  opt.rayleigh_argmin = rayleigh_minimizer(lambda1, m, opt.mass_L);
  if (std::fabs(opt.rayleigh_argmin - a) > 1e-3) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "solve_radial: Rayleigh minimizer %.9g disagrees with smooth-fit root %.9g",
                  opt.rayleigh_argmin, a);
    throw NumericalFailure(buf);
  }
  return opt;
}

void write_profile_csv(std::ostream& out, const RadialOptimum& opt, int samples) {
  if (samples < 2) throw std::invalid_argument("profile export needs at least 2 samples");
  out << "r,theta,u,u_prime\n";
  char line[160];
  for (int i = 0; i < samples; ++i) {
    const double r = i == samples - 1 ? 1.0 : static_cast<double>(i) / (samples - 1);
    std::snprintf(line, sizeof line, "%.15e,%.15e,%.15e,%.15e\n", r, theta_profile(r, opt),
                  u_profile(r, opt), u_prime(r, opt));
    out << line;
  }
}

void write_profile_csv(const std::filesystem::path& path, const RadialOptimum& opt, int samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_profile_csv(out, opt, samples);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace membrane::radial
