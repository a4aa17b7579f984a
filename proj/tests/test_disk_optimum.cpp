#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "disk_benchmark.hpp"
#include "membrane/eigensolver.hpp"
#include "membrane/optimize.hpp"

using namespace membrane;

namespace {

struct Run {
  Mesh mesh = disk_mesh(bench_disk::kRefinement);
  oracle::Disk ref{10.0, 5.0};
  std::vector<std::vector<double>> stage_theta;
  std::vector<std::vector<double>> stage_grad;
  ContinuationReport report;

  Run() {
    DensityOptimizer optimizer(mesh, bench_disk::kM, bench_disk::kMass);
    // Stage by stage so every intermediate density is available.
    ContinuationSchedule schedule;
    const DensityField* warm = nullptr;
    std::vector<double> warm_u;
    DensityField last;
    for (double p : schedule.p_values) {
      FixedPointOptions options;
      const FixedPointResult r = optimizer.fixed_point(p, options, warm, warm_u);
      stage_theta.push_back(r.theta.values);
      stage_grad.push_back(optimizer.space().gradient_norms(r.eigen.u));
      last = r.theta;
      warm = &last;
      warm_u = r.eigen.u;
    }
    report = continuation_solve(optimizer, schedule);
  }
};

const Run& run() {
  static const Run instance;
  return instance;
}

}  // namespace

TEST_CASE("disk benchmark completes every stage") {
  REQUIRE(run().report.completed);
  CHECK(run().report.stages.size() == 6);
}

TEST_CASE("disk benchmark eigenvalue is close to the analytic optimum") {
  const auto& r = run().report;
  CHECK(std::abs(r.eigen.lambda - 10.0) < 0.3);
  CHECK(std::abs(r.certificate.lambda1_feasible - 10.0) < 0.05);
}

TEST_CASE("disk benchmark density approaches the analytic density") {
  const auto& r = run();
  const double plain = bench_disk::relative_l1_distance(r.mesh, r.report.theta.values, r.ref);
  const double rescaled = bench_disk::relative_l1_distance(
      r.mesh, bench_disk::rescaled_to_l1(r.mesh, r.report.theta.values, bench_disk::kMass), r.ref);
  CHECK(plain < 0.10);
  CHECK(rescaled < 0.10);
  CHECK(support_violation(r.mesh, r.report.theta, r.report.eigen.u, 0.1, bench_disk::kMass) < 0.05);
  CHECK(bench_disk::core_mass_fraction(r.mesh, r.report.theta.values, r.ref.a) < 0.02);
}

TEST_CASE("disk benchmark gap shrinks along the schedule") {
  const auto& stages = run().report.stages;
  for (std::size_t i = 1; i < stages.size(); ++i) {
    CAPTURE(stages[i].p);
    CHECK(stages[i].gap <= 1.1 * stages[i - 1].gap);
    CHECK(stages[i].gap >= -1e-9);
  }
}

TEST_CASE("min-max bound at the interpolated analytic eigenfunction") {
  const auto& r = run();
  std::vector<double> u;
  for (const Point& p : r.mesh.nodes()) u.push_back(r.ref.u(std::min(1.0, std::hypot(p.x, p.y))));
  CHECK(std::abs(minmax_upper_bound(u, r.mesh, bench_disk::kM, r.ref.mass) - 10.0) < 0.3);
}

TEST_CASE("disk benchmark solution is close to radially symmetric on the annulus") {
  const auto& r = run();
  const double annulus = r.ref.a;
  for (std::size_t i = 0; i < r.stage_theta.size(); ++i) {
    const double p = r.report.stages[i].p;
    const double grad = bench_disk::ring_spread(r.mesh, r.stage_grad[i], annulus);
    const double theta = bench_disk::ring_spread(r.mesh, r.stage_theta[i], annulus);
    std::printf("p = %-5g ring spread |grad u| %.4f  theta %.4f\n", p, grad, theta);
    CAPTURE(p);
    CHECK(grad < 0.02);
  }
  // theta is proportional to |grad u| at p = 3; smaller p raises the
  // ring-to-ring gradient variation to the power 2/(p-1).
  CHECK(bench_disk::ring_spread(r.mesh, r.stage_theta.front(), annulus) < 0.02);
}
