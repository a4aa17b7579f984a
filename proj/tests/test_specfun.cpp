#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "membrane/quadrature.hpp"
#include "membrane/specfun.hpp"
#include "oracles.hpp"

using namespace membrane;

TEST_CASE("bessel functions match the standard library on [0, 50]") {
  double worst0 = 0.0;
  double worst1 = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double x = 0.01 * i;
    worst0 = std::max(worst0, std::abs(specfun::bessel_j0(x) - oracle::j0(x)));
    worst1 = std::max(worst1, std::abs(specfun::bessel_j1(x) - oracle::j1(x)));
  }
  CHECK(worst0 < 2e-12);
  CHECK(worst1 < 2e-12);
}

TEST_CASE("bessel values at the origin and far out") {
  CHECK(specfun::bessel_j0(0.0) == 1.0);
  CHECK(specfun::bessel_j1(0.0) == 0.0);
  CHECK(std::abs(specfun::bessel_j0(200.0) - oracle::j0(200.0)) < 1e-12);
  CHECK(std::abs(specfun::bessel_j1(1e4) - oracle::j1(1e4)) < 1e-12);
}

TEST_CASE("series and asymptotic branches agree across the switchover") {
  for (double x = 11.0; x <= 14.0; x += 0.125) {
    CHECK(std::abs(specfun::detail::j0_series(x) - specfun::detail::j0_asymptotic(x)) < 1e-11);
    CHECK(std::abs(specfun::detail::j1_series(x) - specfun::detail::j1_asymptotic(x)) < 1e-11);
  }
}

TEST_CASE("bessel at the transition point of the reference disk solution") {
  CHECK(std::abs(specfun::bessel_j1(0.772969) - 0.358339) < 1e-5);
  CHECK(std::abs(specfun::bessel_j0(0.772969) - oracle::j0(0.772969)) < 1e-14);
}

TEST_CASE("first zero of J0") {
  const double z = specfun::first_j0_zero();
  CHECK(std::abs(z - oracle::kJ00) < 1e-14);
  CHECK(std::abs(specfun::bessel_j0(z)) < 1e-15);
}

TEST_CASE("bessel rejects negative and non-finite arguments") {
  CHECK_THROWS_AS(specfun::bessel_j0(-1e-3), std::domain_error);
  CHECK_THROWS_AS(specfun::bessel_j1(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(specfun::bessel_j0(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("adaptive simpson integrates smooth and kinked functions") {
  CHECK(std::abs(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) - 2.0) < 1e-12);
  CHECK(std::abs(adaptive_simpson([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0) - 0.29) < 1e-12);
  CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}
