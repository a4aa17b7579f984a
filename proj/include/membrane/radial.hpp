#pragma once

#include <filesystem>
#include <iosfwd>

// Exact optimal reinforcement of the unit disk.
//
// For a prescribed eigenvalue lambda1 the optimal pair is
//   u(r) = c1 J0(sqrt(lambda1) r)   on [0, a],   u(r) = 1 - r  on [a, 1],
//   theta(r) = 0                    on [0, a],
//   m theta(r) = -lambda1 r^2/3 + lambda1 r/2 - 1 + c0/r  on [a, 1],
// with c1 = (1 - a)/J0(a sqrt(lambda1)) and c0 = a (1 + lambda1 a^2/3 - lambda1 a/2).
// The transition radius a is fixed by slope matching of u at a, and the mass
// L = int theta dx follows from integrating theta. The PDE coefficient is
// 1 + m theta.

namespace membrane::radial {

struct RadialOptimum {
  double lambda1 = 0.0;
  double m = 0.0;
  double a_bar = 0.0;
  double mass_L = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  // Filled by solve_radial; zero when built with make_optimum.
  double r_peak = 0.0;           // argmax of theta on (a_bar, 1]
  double rayleigh_argmin = 0.0;  // minimizer of radial_rayleigh over a
};

// Builds the closed-form coefficients for an arbitrary transition radius.
// mass_L is taken from the mass relation. Throws std::invalid_argument on
// a outside (0,1), m <= 0, or J0(a sqrt(lambda1)) == 0.
RadialOptimum make_optimum(double lambda1, double m, double a);

double theta_profile(double r, const RadialOptimum& opt);

enum class Normalization { kUnnormalized, kUnitL2 };

// Unnormalized: outer branch is exactly 1 - r. kUnitL2 scales so that
// int_disk u^2 dx = 1.
double u_profile(double r, const RadialOptimum& opt,
                 Normalization norm = Normalization::kUnnormalized);
double u_prime(double r, const RadialOptimum& opt,
               Normalization norm = Normalization::kUnnormalized);

// int_disk u^2 dx for the unnormalized profile.
double u_l2_norm_squared(const RadialOptimum& opt);

// Mass relation solved for lambda1:
//   lambda1 = 12 (mL/(2 pi) + (a-1)^2/2) / (1 - 6a^2 + 8a^3 - 3a^4).
// The denominator is evaluated as (1-a)^3 (1+3a).
double lambda_from_a(double a, double m, double mass_L);

// Inverse of lambda_from_a in L.
double mass_from_a(double a, double m, double lambda1);

// (1-a) sqrt(lambda1) J1(a sqrt(lambda1)) / J0(a sqrt(lambda1)) - 1.
// Zero exactly when the inner and outer slopes of u agree at a.
double smooth_fit_residual(double a, double lambda1);

// Which amplitude multiplies the gradient energy of the Bessel core.
// kProfileJ0 is c1 = (1-a)/J0(a sqrt(lambda1)), the derivative of the actual
// profile. kPrintedJ1 divides by J1 instead and is kept for comparison only.
enum class AmplitudeReading { kProfileJ0, kPrintedJ1 };

// Min-max functional (int |grad u|^2 + mL ||grad u||_inf^2) / int u^2
// restricted to the trial family u_a (Bessel core on [0,a], 1 - r outside),
// divided through by 2 pi. ||u_a'||_inf = max(1, max_{[0,a]} |c1 sqrt(l) J1|);
// for a <= a_bar it is 1 and the expression reduces to the classical one.
double radial_rayleigh(double a, double lambda1, double m, double mass_L,
                       AmplitudeReading reading = AmplitudeReading::kProfileJ0);

// Grid scan plus golden-section refinement of radial_rayleigh over
// a in (0, min(1, j00/sqrt(lambda1))).
double rayleigh_minimizer(double lambda1, double m, double mass_L,
                          AmplitudeReading reading = AmplitudeReading::kProfileJ0,
                          int grid_points = 400);

// argmax of theta on [a_bar, 1].
double theta_peak(const RadialOptimum& opt);

// Solves for a_bar by bisection on smooth_fit_residual, recovers L, and
// cross-checks a_bar against rayleigh_minimizer.
// Throws std::domain_error when lambda1 <= j00^2 or when the resulting
// density is negative somewhere on the annulus (lambda1 below ~6.1711);
// NumericalFailure when the bracket or the cross-check fails.
RadialOptimum solve_radial(double lambda1, double m);

// CSV with header r,theta,u,u_prime; `samples` rows at r = i/(samples-1).
void write_profile_csv(std::ostream& out, const RadialOptimum& opt, int samples);
void write_profile_csv(const std::filesystem::path& path, const RadialOptimum& opt, int samples);

}  // namespace membrane::radial
