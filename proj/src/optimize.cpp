#include "membrane/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "membrane/errors.hpp"
#include "membrane/kernels.hpp"

namespace membrane {

namespace {

double l1_change(std::span<const double> areas, std::span<const double> a,
                 std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t t = 0; t < areas.size(); ++t) sum += areas[t] * std::fabs(a[t] - b[t]);
  return sum;
}

void saturate(std::span<const double> areas, DensityField& theta, double mass_L) {
  const double current = lp_mass(areas, theta.values, theta.p);
  if (current > 0.0) {
    const double s = mass_L / current;
    for (double& v : theta.values) v *= s;
  }
}

}  // namespace

DensityField theta_update(std::span<const double> grad_norms, std::span<const double> areas,
                          double p, double mass_L) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("theta_update: p must be > 1");
  if (!(mass_L >= 0.0)) throw std::invalid_argument("theta_update: mass L must be >= 0");
  if (grad_norms.size() != areas.size()) throw std::invalid_argument("theta_update: size mismatch");
  double largest = 0.0;
  for (double g : grad_norms) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("theta_update: gradient norms must be finite and >= 0");
    }
    largest = std::max(largest, g);
  }
  if (largest == 0.0) {
    throw std::invalid_argument("theta_update: gradient field vanishes identically");
  }

  const double exponent = 2.0 / (p - 1.0);
  // ||g||_p^p = sum area (|grad u| / max)^(exponent p)
  const double norm = std::pow(kernels::omp::power_sum(areas, grad_norms, largest, exponent * p),
                               1.0 / p);
  DensityField theta{std::vector<double>(grad_norms.size()), p};
  const auto n = static_cast<std::int64_t>(grad_norms.size());
  const double scale = mass_L / norm;
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    theta.values[t] =
        grad_norms[t] > 0.0 ? scale * std::pow(grad_norms[t] / largest, exponent) : 0.0;
  }
  return theta;
}

DensityOptimizer::DensityOptimizer(const Mesh& mesh, double m, double mass_L)
    : mesh_(mesh),
      space_(mesh, Block::kInterior),
      mass_(space_.mass()),
      full_mass_(FemSpace(mesh, Block::kAllNodes).mass()),
      m_(m),
      mass_L_(mass_L) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("stiffness m must be >= 0");
  if (!(mass_L >= 0.0) || !std::isfinite(mass_L)) throw std::invalid_argument("mass L must be >= 0");
  if (space_.dofs().size() == 0) throw std::invalid_argument("mesh has no interior nodes");
}

NodalEigenPair DensityOptimizer::eigenpair(const DensityField& theta, const EigenOptions& options,
                                           std::span<const double> nodal_start) {
  const CsrMatrix k = space_.stiffness(theta, m_);
  std::vector<double> start;
  if (!nodal_start.empty()) start = space_.dofs().restrict_to_dofs(nodal_start);
  const EigenPair pair = solver_.solve(k, mass_, options, start);
  return {pair.lambda, space_.dofs().extend_to_nodes(pair.u), pair.residual, pair.converged};
}

double DensityOptimizer::upper_bound(std::span<const double> nodal_u) const {
  const auto g = space_.gradient_norms(nodal_u);
  const double energy = kernels::omp::power_sum(mesh_.areas(), g, 1.0, 2.0);
  const double largest = g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
  const double denominator = quadratic_form(full_mass_, nodal_u);
  if (!(denominator > 0.0)) throw std::invalid_argument("minmax_upper_bound: zero vector");
  return (energy + m_ * mass_L_ * largest * largest) / denominator;
}

FixedPointResult DensityOptimizer::fixed_point(double p, const FixedPointOptions& options,
                                               const DensityField* warm_theta,
                                               std::span<const double> warm_u) {
  if (!(p > 1.0)) throw std::invalid_argument("fixed_point: p must be > 1");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw std::invalid_argument("fixed_point: damping must lie in (0, 1]");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw std::invalid_argument("fixed_point: tol must be positive and max_iter >= 1");
  }
  const auto areas = mesh_.areas();

  DensityField theta;
  if (warm_theta != nullptr) {
    check_density(mesh_, *warm_theta);
    theta = *warm_theta;
    theta.p = p;
    saturate(areas, theta, mass_L_);
  } else {
    theta = DensityField::uniform(mesh_, mass_L_ * std::pow(mesh_.total_area(), -1.0 / p), p);
  }

  std::vector<double> start(warm_u.begin(), warm_u.end());
  const double normalizer = mass_L_ > 0.0 ? mass_L_ : 1.0;
  double damping = options.damping;
  double previous_delta = std::numeric_limits<double>::infinity();

  FixedPointResult result;
  for (int it = 1; it <= options.max_iter; ++it) {
    NodalEigenPair eig = eigenpair(theta, options.eigen, start);
    if (!eig.converged) {
      result.theta = theta;
      result.eigen = std::move(eig);
      result.iterations = it;
      result.final_damping = damping;
      result.theta_delta = std::numeric_limits<double>::quiet_NaN();
      return result;
    }
    DensityField target =
        mass_L_ > 0.0 ? theta_update(space_.gradient_norms(eig.u), areas, p, mass_L_)
                      : DensityField::zero(mesh_, p);
    const double delta = l1_change(areas, target.values, theta.values) / normalizer;

    result.theta = theta;
    result.eigen = eig;
    result.iterations = it;
    result.theta_delta = delta;
    result.final_damping = damping;
    if (delta < options.tol) {
      result.converged = true;
      return result;
    }

    if (delta > previous_delta) damping = std::max(0.5 * damping, options.min_damping);
    previous_delta = delta;
    for (std::size_t t = 0; t < theta.values.size(); ++t) {
      theta.values[t] = (1.0 - damping) * theta.values[t] + damping * target.values[t];
    }
    saturate(areas, theta, mass_L_);
    start = std::move(eig.u);
  }
  return result;
}

FixedPointResult fixed_point_solve(const Mesh& mesh, double m, double mass_L, double p,
                                   const FixedPointOptions& options) {
  DensityOptimizer optimizer(mesh, m, mass_L);
  return optimizer.fixed_point(p, options);
}

double minmax_upper_bound(std::span<const double> nodal_u, const Mesh& mesh, double m,
                          double mass_L) {
  if (nodal_u.size() != mesh.num_nodes()) {
    throw std::invalid_argument("minmax_upper_bound: need one value per mesh node");
  }
  const auto g = gradient_norms(mesh, nodal_u);
  const double energy = kernels::omp::power_sum(mesh.areas(), g, 1.0, 2.0);
  const double largest = *std::max_element(g.begin(), g.end());
  const double denominator = quadratic_form(assemble_mass(mesh, Block::kAllNodes), nodal_u);
  if (!(denominator > 0.0)) throw std::invalid_argument("minmax_upper_bound: zero vector");
  return (energy + m * mass_L * largest * largest) / denominator;
}

double support_violation(const Mesh& mesh, const DensityField& theta,
                         std::span<const double> nodal_u, double delta, double mass_L) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("support_violation: delta in (0,1)");
  check_density(mesh, theta);
  if (mass_L <= 0.0) return 0.0;
  const auto g = gradient_norms(mesh, nodal_u);
  const double threshold = (1.0 - delta) * *std::max_element(g.begin(), g.end());
  const auto areas = mesh.areas();
  double violating = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (g[t] < threshold) violating += areas[t] * theta.values[t];
  }
  return violating / mass_L;
}

double gradient_norm_ratio(const Mesh& mesh, std::span<const double> nodal_u, double p,
                           bool mean_normalized) {
  if (!(p > 1.0)) throw std::invalid_argument("gradient_norm_ratio: p must be > 1");
  const double q = p / (p - 1.0);
  const auto g = gradient_norms(mesh, nodal_u);
  const double largest = *std::max_element(g.begin(), g.end());
  if (largest == 0.0) throw std::invalid_argument("gradient_norm_ratio: zero gradient field");
  double integral = kernels::omp::power_sum(mesh.areas(), g, largest, 2.0 * q);
  if (mean_normalized) integral /= mesh.total_area();
  return std::pow(integral, 1.0 / (2.0 * q));
}

void ContinuationSchedule::validate() const {
  if (p_values.empty()) throw std::invalid_argument("schedule: p_values is empty");
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    if (!(p_values[i] > 1.0) || !std::isfinite(p_values[i])) {
      throw std::invalid_argument("schedule: every p must be > 1");
    }
    if (i > 0 && !(p_values[i] < p_values[i - 1])) {
      throw std::invalid_argument("schedule: p_values must be strictly decreasing");
    }
  }
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("schedule: damping in (0,1]");
  if (!(inner_tol > 0.0) || inner_max_iter < 1) {
    throw std::invalid_argument("schedule: inner_tol must be positive and inner_max_iter >= 1");
  }
}

Certificate certify(DensityOptimizer& optimizer, const DensityField& theta,
                    std::span<const double> nodal_u, const EigenOptions& options) {
  const auto areas = optimizer.mesh().areas();
  DensityField feasible = theta;
  feasible.p = 1.0;
  const double l1 = lp_mass(areas, feasible.values, 1.0);
  const double scale = l1 > 0.0 ? optimizer.mass_L() / l1 : 0.0;
  for (double& v : feasible.values) v *= scale;

  Certificate c;
  const NodalEigenPair pair = optimizer.eigenpair(feasible, options, nodal_u);
  if (!pair.converged) throw NumericalFailure("certify: eigen solve did not converge");
  c.lambda1_feasible = pair.lambda;
  c.upper_bound = optimizer.upper_bound(nodal_u);
  c.gap = c.upper_bound - c.lambda1_feasible;
  c.relative_gap = c.gap / c.upper_bound;
  return c;
}

ContinuationReport continuation_solve(DensityOptimizer& optimizer,
                                      const ContinuationSchedule& schedule) {
  schedule.validate();
  FixedPointOptions options;
  options.tol = schedule.inner_tol;
  options.max_iter = schedule.inner_max_iter;
  options.damping = schedule.damping;
  options.eigen = schedule.eigen;

  ContinuationReport report;
  const DensityField* warm_theta = nullptr;
  for (double p : schedule.p_values) {
    FixedPointResult stage =
        optimizer.fixed_point(p, options, warm_theta, report.eigen.u);
    StageRecord record;
    record.p = p;
    record.iterations = stage.iterations;
    record.lambda1 = stage.eigen.lambda;
    record.lp_mass = lp_mass(optimizer.mesh().areas(), stage.theta.values, p);
    record.theta_delta = stage.theta_delta;
    record.damping = stage.final_damping;
    record.converged = stage.converged;

    report.theta = std::move(stage.theta);
    report.eigen = std::move(stage.eigen);
    warm_theta = &report.theta;
    if (!record.converged) {
      report.stages.push_back(record);
      report.failure = "stage p=" + std::to_string(p) + " did not converge after " +
                       std::to_string(record.iterations) + " iterations";
      return report;
    }
    const Certificate c = certify(optimizer, report.theta, report.eigen.u, schedule.eigen);
    record.upper_bound = c.upper_bound;
    record.lambda1_feasible = c.lambda1_feasible;
    record.gap = c.gap;
    report.certificate = c;
    report.stages.push_back(record);
  }
  report.completed = true;
  return report;
}

ContinuationReport continuation_solve(const Mesh& mesh, double m, double mass_L,
                                      const ContinuationSchedule& schedule) {
  DensityOptimizer optimizer(mesh, m, mass_L);
  return continuation_solve(optimizer, schedule);
}

}  // namespace membrane
