#pragma once

// Data-parallel inner loops. Each kernel exists twice with the same
// signature: `serial` is the straightforward reference used by the tests and
// the benchmark, `omp` is the OpenMP version used by the library.
//
// The OpenMP reductions split the index range into fixed blocks of
// kReductionBlock entries, reduce each block in parallel, then add the block
// partials in order. Results therefore do not depend on the thread count.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "membrane/sparse.hpp"

namespace membrane::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using LocalMatrix = std::array<double, 9>;

// Precomputed scatter for assembling a CSR matrix from per-triangle local
// matrices: entry e receives sum over k in [entry_ptr[e], entry_ptr[e+1]) of
//   weight[triangle[k]] * local[triangle[k]][slot[k]].
struct GatherPlan {
  std::vector<std::int32_t> entry_ptr{0};
  std::vector<std::int32_t> triangle;
  std::vector<std::uint8_t> slot;
};

// Barycentric gradients: grad phi_k on triangle t is basis[t][k].
using TriangleBasis = std::array<Vec2, 3>;

namespace serial {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gather(const GatherPlan& plan, std::span<const LocalMatrix> local,
            std::span<const double> weight, std::span<double> values);
void element_gradients(std::span<const std::array<std::int32_t, 3>> triangles,
                       std::span<const TriangleBasis> basis, std::span<const double> u,
                       std::span<Vec2> grad);
// sum_t area[t] * (g[t] / scale)^exponent
double power_sum(std::span<const double> area, std::span<const double> g, double scale,
                 double exponent);
}  // namespace serial

namespace omp {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gather(const GatherPlan& plan, std::span<const LocalMatrix> local,
            std::span<const double> weight, std::span<double> values);
void element_gradients(std::span<const std::array<std::int32_t, 3>> triangles,
                       std::span<const TriangleBasis> basis, std::span<const double> u,
                       std::span<Vec2> grad);
double power_sum(std::span<const double> area, std::span<const double> g, double scale,
                 double exponent);
}  // namespace omp

}  // namespace membrane::kernels
