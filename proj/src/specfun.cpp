#include "membrane/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace membrane::specfun {

namespace {

void check_argument(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(name) + ": argument must be finite");
  }
  if (x < 0.0) {
    throw std::domain_error(std::string(name) + ": argument must be nonnegative");
  }
}

// sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!)
long double series(long double x, int order) {
  const long double half = x / 2.0L;
  const long double q = -half * half;
  long double term = order == 0 ? 1.0L : half;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + order));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-24L) break;
  }
  return sum;
}

// Hankel P and Q sums, stopped before the terms start growing.
void hankel_pq(double x, int order, double& p, double& q) {
  const double mu = 4.0 * order * order;
  const double z = 8.0 * x;
  p = 1.0;
  q = 0.0;
  // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! z^k); P takes even k with
  // alternating sign, Q the odd ones.
  double a = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (k * z);
    if (std::fabs(a) >= std::fabs(previous)) break;
    previous = a;
    switch (k % 4) {
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
      case 0: p += a; break;
    }
  }
}

double asymptotic(double x, int order) {
  double p = 0.0;
  double q = 0.0;
  hankel_pq(x, order, p, q);
  const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

namespace detail {
double j0_series(double x) { return static_cast<double>(series(x, 0)); }
double j1_series(double x) { return static_cast<double>(series(x, 1)); }
double j0_asymptotic(double x) { return asymptotic(x, 0); }
double j1_asymptotic(double x) { return asymptotic(x, 1); }
}  // namespace detail

double bessel_j0(double x) {
  check_argument(x, "bessel_j0");
  return x < kSeriesSwitchover ? detail::j0_series(x) : detail::j0_asymptotic(x);
}

double bessel_j1(double x) {
  check_argument(x, "bessel_j1");
  return x < kSeriesSwitchover ? detail::j1_series(x) : detail::j1_asymptotic(x);
}

double first_j0_zero() {
  static const double zero = [] {
    double x = 2.4;
    for (int i = 0; i < 50; ++i) {
      const double step = bessel_j0(x) / bessel_j1(x);  // Newton with J0' = -J1
      x += step;
      if (std::fabs(step) < 1e-16) break;
    }
    return x;
  }();
  return zero;
}

}  // namespace membrane::specfun
