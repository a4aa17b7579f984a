#include <cmath>

#include "membrane/kernels.hpp"

namespace membrane::kernels::serial {

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  for (std::int32_t i = 0; i < a.rows; ++i) {
    double sum = 0.0;
    for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) sum += a.values[k] * x[a.cols[k]];
    y[i] = sum;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void gather(const GatherPlan& plan, std::span<const LocalMatrix> local,
            std::span<const double> weight, std::span<double> values) {
  for (std::size_t e = 0; e + 1 < plan.entry_ptr.size(); ++e) {
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
  for (std::size_t t = 0; t < triangles.size(); ++t) {
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
  double sum = 0.0;
  for (std::size_t t = 0; t < area.size(); ++t) {
    if (g[t] > 0.0) sum += area[t] * std::pow(g[t] / scale, exponent);
  }
  return sum;
}

}  // namespace membrane::kernels::serial
