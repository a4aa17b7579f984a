#include <algorithm>
#include <cmath>
#include <vector>

#include "membrane/kernels.hpp"

namespace membrane::kernels::omp {

namespace {

// Block partials reduced in parallel, then summed in block order.
template <typename Body>
double blocked_sum(std::size_t n, Body body) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto num_blocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < num_blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(n, begin + kReductionBlock);
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += body(i);
    partial[b] = sum;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static)
  for (std::int32_t i = 0; i < a.rows; ++i) {
    double sum = 0.0;
    for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) sum += a.values[k] * x[a.cols[k]];
    y[i] = sum;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  return blocked_sum(x.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gather(const GatherPlan& plan, std::span<const LocalMatrix> local,
            std::span<const double> weight, std::span<double> values) {
  const auto entries = static_cast<std::int64_t>(plan.entry_ptr.size()) - 1;
#pragma omp parallel for schedule(static)
  for (std::int64_t e = 0; e < entries; ++e) {
    double sum = 0.0;
    for (std::int32_t k = plan.entry_ptr[e]; k < plan.entry_ptr[e + 1]; ++k) {
      const auto t = plan.triangle[k];
      sum += weight[t] * local[t][plan.slot[k]];
    }
    values[e] = sum;
  }
}

void element_gradients(std::span<const std::array<std::int32_t, 3>> triangles,
                       std::span<const TriangleBasis> basis, std::span<const double> u,
                       std::span<Vec2> grad) {
  const auto n = static_cast<std::int64_t>(triangles.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    Vec2 g;
    for (int k = 0; k < 3; ++k) {
      const double value = u[triangles[t][k]];
      g.x += value * basis[t][k].x;
      g.y += value * basis[t][k].y;
    }
    grad[t] = g;
  }
}

double power_sum(std::span<const double> area, std::span<const double> g, double scale,
                 double exponent) {
  return blocked_sum(area.size(), [&](std::size_t t) {
    return g[t] > 0.0 ? area[t] * std::pow(g[t] / scale, exponent) : 0.0;
  });
}

}  // namespace membrane::kernels::omp
