#pragma once

// Bessel functions of the first kind, orders 0 and 1, for real x >= 0.
//
// x <  12: power series summed in long double.
// x >= 12: Hankel asymptotic expansion, truncated at its smallest term.
// Absolute error is below 2e-12 on [0, 50]; near the zeros of J0/J1 that is
// the meaningful measure, since relative error is unbounded there.

namespace membrane::specfun {

inline constexpr double kSeriesSwitchover = 12.0;

double bessel_j0(double x);
double bessel_j1(double x);

// First positive zero j_{0,0} of J0, refined by Newton on J0' = -J1.
double first_j0_zero();

namespace detail {
// Regime-specific evaluators, exposed for the switchover overlap test.
double j0_series(double x);
double j1_series(double x);
double j0_asymptotic(double x);
double j1_asymptotic(double x);
}  // namespace detail

}  // namespace membrane::specfun
