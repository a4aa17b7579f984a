#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "membrane/radial.hpp"
#include "membrane/specfun.hpp"
#include "oracles.hpp"

using namespace membrane;
using radial::Normalization;

namespace {

constexpr double kPi = std::numbers::pi;

// Min-max quotient of the trial profile with transition radius a <= a_bar,
// divided by 2 pi, from closed-form Bessel integrals.
double quotient_oracle(double a, double lam, double m, double mass) {
  const double k = std::sqrt(lam);
  const double x = k * a;
  const double c1 = (1.0 - a) / oracle::j0(x);
  const double j0 = oracle::j0(x);
  const double j1 = oracle::j1(x);
  const double j2 = 2.0 / x * j1 - j0;
  const double core_grad = c1 * c1 * lam * a * a / 2.0 * (j1 * j1 - j0 * j2);
  const double core_u2 = c1 * c1 * a * a / 2.0 * (j0 * j0 + j1 * j1);
  const double ring_grad = (1.0 - a * a) / 2.0;
  const double ring_u2 = 1.0 / 12.0 - (a * a / 2.0 - 2.0 * a * a * a / 3.0 + a * a * a * a / 4.0);
  return (core_grad + ring_grad + m * mass / (2.0 * kPi)) / (core_u2 + ring_u2);
}

}  // namespace

TEST_CASE("reference disk case matches the reference transition radius and mass") {
  const auto opt = radial::solve_radial(10.0, 5.0);
  CHECK(std::abs(opt.a_bar - 0.244419) < 1e-4);
  CHECK(std::abs(opt.mass_L - 0.424242) < 1e-4);
  CHECK(std::abs(opt.r_peak - 0.751491) < 1e-4);
}

TEST_CASE("disk solution agrees with the independent oracle") {
  for (double lam : {6.5, 8.0, 10.0, 15.0, 30.0}) {
    for (double m : {1.0, 5.0, 20.0}) {
      CAPTURE(lam);
      CAPTURE(m);
      const oracle::Disk ref(lam, m);
      const auto opt = radial::solve_radial(lam, m);
      CHECK(std::abs(opt.a_bar - ref.a) < 1e-12);
      CHECK(std::abs(opt.c1 - ref.c1) < 1e-11);
      CHECK(std::abs(opt.mass_L - ref.mass) < 1e-9);
      CHECK(std::abs(radial::lambda_from_a(opt.a_bar, m, opt.mass_L) - lam) < 1e-9 * lam);
    }
  }
}

TEST_CASE("mass identity and smooth fit at the solved radius") {
  const auto opt = radial::solve_radial(10.0, 5.0);
  const double mass =
      2.0 * kPi * oracle::simpson([&](double r) { return radial::theta_profile(r, opt) * r; }, opt.a_bar, 1.0);
  CHECK(std::abs(mass - opt.mass_L) < 1e-8);
  CHECK(std::abs(radial::smooth_fit_residual(opt.a_bar, opt.lambda1)) < 1e-8);
  const double left = radial::u_prime(opt.a_bar * (1.0 - 1e-12), opt);
  const double right = radial::u_prime(opt.a_bar * (1.0 + 1e-12), opt);
  CHECK(std::abs(left - right) < 1e-8);
  CHECK(std::abs(radial::u_profile(opt.a_bar, opt) - (1.0 - opt.a_bar)) < 1e-12);
}

TEST_CASE("closed-form profiles solve the radial equation") {
  const auto opt = radial::solve_radial(10.0, 5.0);
  const double lam = opt.lambda1;
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double r = 0.01 + 0.98 * i / 199.0;
    if (std::abs(r - opt.a_bar) < 2 * h) continue;
    double res = 0.0;
    if (r < opt.a_bar) {
      const auto u = [&](double s) { return radial::u_profile(s, opt); };
      const double upp = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
      const double up = (u(r + h) - u(r - h)) / (2.0 * h);
      res = -upp - up / r - lam * u(r);
    } else {
      // (1/r) d/dr ((1 + m theta) r) = lambda (1 - r) since u' = -1.
      const auto flux = [&](double s) { return (1.0 + opt.m * radial::theta_profile(s, opt)) * s; };
      res = (flux(r + h) - flux(r - h)) / (2.0 * h) / r - lam * (1.0 - r);
    }
    worst = std::max(worst, std::abs(res));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("density vanishes on the core, is nonnegative and peaks at r_peak") {
  const auto opt = radial::solve_radial(10.0, 5.0);
  double best = -1.0;
  double best_r = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double r = i / 100000.0;
    const double t = radial::theta_profile(r, opt);
    if (r < opt.a_bar) {
      CHECK(t == 0.0);
    }
    CHECK(t >= 0.0);
    if (t > best) {
      best = t;
      best_r = r;
    }
  }
  CHECK(std::abs(best_r - opt.r_peak) < 2e-5);
  CHECK(std::abs(radial::theta_profile(1.0, opt) - 0.1322109155838982) < 1e-9);
  CHECK_THROWS_AS(radial::theta_profile(1.5, opt), std::invalid_argument);
  CHECK_THROWS_AS(radial::theta_profile(-0.1, opt), std::invalid_argument);
}

TEST_CASE("eigenfunction value at the centre and unit L2 normalization") {
  const auto opt = radial::solve_radial(10.0, 5.0);
  CHECK(std::abs(radial::u_profile(0.0, opt) - 0.882571) < 1e-4);
  const double norm2 = 2.0 * kPi * oracle::simpson([&](double r) {
                         const double u = radial::u_profile(r, opt, Normalization::kUnitL2);
                         return u * u * r;
                       }, 0.0, 1.0);
  CHECK(std::abs(norm2 - 1.0) < 1e-10);
  const double raw = 2.0 * kPi * oracle::simpson([&](double r) {
                       const double u = radial::u_profile(r, opt);
                       return u * u * r;
                     }, 0.0, 1.0);
  CHECK(std::abs(radial::u_l2_norm_squared(opt) - raw) < 1e-10);
}

TEST_CASE("mass relation examples") {
  CHECK(std::abs(radial::lambda_from_a(0.5, 1.0, kPi / 5.0) - 8.64) < 1e-6);
  CHECK(std::abs(radial::lambda_from_a(0.5, 1.0, 0.628319) - 8.64) < 1e-5);
  CHECK(std::abs(radial::lambda_from_a(0.0, 2.0, 0.0) - 6.0) < 1e-14);
  for (double a : {0.1, 0.3, 0.5}) {
    const double mass = radial::mass_from_a(a, 3.0, 12.0);
    CHECK(mass > 0.0);
    CHECK(std::abs(radial::lambda_from_a(a, 3.0, mass) - 12.0) < 1e-10);
  }
  CHECK_THROWS_AS(radial::lambda_from_a(1.0, 1.0, 0.5), std::logic_error);
  CHECK_THROWS_AS(radial::lambda_from_a(0.5, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("scalar quotient matches closed-form Bessel integrals left of the transition") {
  const oracle::Disk ref(10.0, 5.0);
  for (double a : {0.05, 0.1, 0.2, 0.24}) {
    CAPTURE(a);
    CHECK(std::abs(radial::radial_rayleigh(a, 10.0, 5.0, ref.mass) - quotient_oracle(a, 10.0, 5.0, ref.mass)) <
          1e-9);
  }
  CHECK(std::abs(radial::radial_rayleigh(ref.a, 10.0, 5.0, ref.mass) - 10.0) < 1e-8);
}

TEST_CASE("scalar minimization recovers the transition radius") {
  for (double lam : {8.0, 10.0, 20.0}) {
    const oracle::Disk ref(lam, 5.0);
    CHECK(std::abs(radial::rayleigh_minimizer(lam, 5.0, ref.mass) - ref.a) < 1e-3);
  }
}

TEST_CASE("eigenvalues at or below the admissibility threshold are rejected") {
  try {
    radial::solve_radial(1.0, 5.0);
    FAIL("expected rejection");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("not admissible") != std::string::npos);
  }
  const double j00 = specfun::first_j0_zero();
  CHECK_THROWS_AS(radial::solve_radial(j00 * j00, 5.0), std::domain_error);
  CHECK_THROWS_AS(radial::solve_radial(j00 * j00 + 1e-9, 5.0), std::domain_error);
  CHECK_THROWS_AS(radial::solve_radial(6.0, 5.0), std::domain_error);
  const auto opt = radial::solve_radial(6.2, 5.0);
  CHECK(radial::theta_profile(1.0, opt) >= 0.0);
  CHECK(opt.mass_L > 0.0);
  CHECK_THROWS_AS(radial::solve_radial(10.0, 0.0), std::invalid_argument);
}

TEST_CASE("profile csv has one row per sample") {
  const auto opt = radial::solve_radial(10.0, 5.0);
  std::ostringstream out;
  radial::write_profile_csv(out, opt, 37);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,theta,u,u_prime");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 37);
}
