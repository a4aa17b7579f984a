#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "membrane/eigensolver.hpp"
#include "membrane/fem.hpp"
#include "membrane/mesh.hpp"

namespace membrane {

// Optimal density in the L^p-constrained class for a fixed eigenfunction:
//   theta_T = L g_T / (sum_T area_T g_T^p)^(1/p),  g_T = |grad u|_T^(2/(p-1)).
// Triangles with zero gradient get theta = 0. Gradients are rescaled by their
// maximum before exponentiation, so no power overflows. The result
// saturates the constraint: lp_mass(theta, p) == L.
// Throws std::invalid_argument for p <= 1, L < 0, size mismatch, or an
// all-zero gradient field.
DensityField theta_update(std::span<const double> grad_norms, std::span<const double> areas,
                          double p, double mass_L);

struct FixedPointOptions {
  double tol = 1e-8;     // on the relative L1 change of theta
  int max_iter = 2000;
  double damping = 0.5;  // initial relaxation; halved when the change grows
  double min_damping = 1.0 / 1024.0;
  EigenOptions eigen;
};

// Eigenfunction on every mesh node (zero on the boundary).
struct NodalEigenPair {
  double lambda = 0.0;
  std::vector<double> u;
  double residual = 0.0;
  bool converged = false;
};

struct FixedPointResult {
  DensityField theta;
  NodalEigenPair eigen;
  int iterations = 0;
  bool converged = false;
  // sum_T area_T |theta_update(u) - theta|_T / L at the returned pair.
  double theta_delta = 0.0;
  double final_damping = 0.0;
};

// Holds the discretization and the eigen solver workspace for repeated
// solves on one mesh. Not thread-safe; independent runs use separate
// instances.
class DensityOptimizer {
 public:
  DensityOptimizer(const Mesh& mesh, double m, double mass_L);

  const Mesh& mesh() const { return mesh_; }
  const FemSpace& space() const { return space_; }
  double m() const { return m_; }
  double mass_L() const { return mass_L_; }

  NodalEigenPair eigenpair(const DensityField& theta, const EigenOptions& options,
                           std::span<const double> nodal_start = {});

  // Alternates the eigen solve with the damped closed-form density update
  //   theta <- (1 - d) theta + d theta_update(u),
  // rescaled afterwards to lp_mass == L. Stops when the pair (theta, u) is a
  // fixed point to `tol`; the returned u is the eigenfunction of the
  // returned theta. Warm starts are optional.
  FixedPointResult fixed_point(double p, const FixedPointOptions& options,
                               const DensityField* warm_theta = nullptr,
                               std::span<const double> warm_u = {});

  // (int |grad u|^2 + m L max_T |grad u|_T^2) / int u^2 for nodal u.
  double upper_bound(std::span<const double> nodal_u) const;

 private:
  const Mesh& mesh_;
  FemSpace space_;
  CsrMatrix mass_;
  CsrMatrix full_mass_;
  double m_;
  double mass_L_;
  InverseIteration solver_;
};

FixedPointResult fixed_point_solve(const Mesh& mesh, double m, double mass_L, double p,
                                   const FixedPointOptions& options = {});

// Upper end of the min-max sandwich. For every density with int theta <= L,
//   lambda_1(theta) <= minmax_upper_bound(u, ...)  for all u != 0.
double minmax_upper_bound(std::span<const double> nodal_u, const Mesh& mesh, double m,
                          double mass_L);

// Mass of theta on triangles where |grad u| < (1 - delta) max |grad u|,
// divided by L. Zero for theta == 0 or L == 0.
double support_violation(const Mesh& mesh, const DensityField& theta,
                         std::span<const double> nodal_u, double delta, double mass_L);

// ||grad u||_{L^{2q}} / max_T |grad u|_T with q = p/(p-1). With
// `mean_normalized` the integral is divided by the domain area, which makes
// the ratio <= 1.
double gradient_norm_ratio(const Mesh& mesh, std::span<const double> nodal_u, double p,
                           bool mean_normalized);

struct ContinuationSchedule {
  std::vector<double> p_values{3.0, 2.0, 1.5, 1.25, 1.1, 1.05};
  double inner_tol = 1e-8;
  int inner_max_iter = 2000;
  double damping = 0.5;
  EigenOptions eigen;

  // Throws std::invalid_argument unless p_values is nonempty, strictly
  // decreasing and > 1, and damping lies in (0, 1].
  void validate() const;
};

struct StageRecord {
  double p = 0.0;
  int iterations = 0;
  double lambda1 = 0.0;
  double lp_mass = 0.0;
  double theta_delta = 0.0;
  double damping = 0.0;
  bool converged = false;
  double upper_bound = 0.0;
  double lambda1_feasible = 0.0;
  double gap = 0.0;
};

// Min-max certificate for the L1-constrained problem. theta_p is rescaled to
// int theta = L (so it is admissible there) and its eigenvalue is the lower
// end of the sandwich; the upper end is minmax_upper_bound at u_p.
struct Certificate {
  double lambda1_feasible = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;           // upper_bound - lambda1_feasible, >= 0 up to round-off
  double relative_gap = 0.0;  // gap / upper_bound
};

struct ContinuationReport {
  std::vector<StageRecord> stages;
  DensityField theta;
  NodalEigenPair eigen;
  Certificate certificate;
  bool completed = false;
  std::string failure;  // set when a stage did not converge
};

Certificate certify(DensityOptimizer& optimizer, const DensityField& theta,
                    std::span<const double> nodal_u, const EigenOptions& options = {});

// Runs fixed_point at each p, warm-starting theta and u from the previous
// stage. A stage that fails to converge ends the run; the report then holds
// the stages so far and completed == false.
ContinuationReport continuation_solve(const Mesh& mesh, double m, double mass_L,
                                      const ContinuationSchedule& schedule);
ContinuationReport continuation_solve(DensityOptimizer& optimizer,
                                      const ContinuationSchedule& schedule);

}  // namespace membrane
