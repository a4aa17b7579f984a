#include "membrane/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "membrane/kernels.hpp"

namespace membrane {

double CsrMatrix::at(std::int32_t i, std::int32_t j) const {
  const auto first = cols.begin() + row_ptr[i];
  const auto last = cols.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return it != last && *it == j ? values[it - cols.begin()] : 0.0;
}

CsrMatrix identity_matrix(std::int32_t n) {
  CsrMatrix a;
  a.rows = n;
  a.row_ptr.resize(n + 1);
  a.cols.resize(n);
  a.values.assign(n, 1.0);
  for (std::int32_t i = 0; i <= n; ++i) a.row_ptr[i] = i;
  for (std::int32_t i = 0; i < n; ++i) a.cols[i] = i;
  return a;
}

double symmetry_defect(const CsrMatrix& a) {
  double largest = 0.0;
  double defect = 0.0;
  for (std::int32_t i = 0; i < a.rows; ++i) {
    for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      largest = std::max(largest, std::fabs(a.values[k]));
      defect = std::max(defect, std::fabs(a.values[k] - a.at(a.cols[k], i)));
    }
  }
  return largest > 0.0 ? defect / largest : 0.0;
}

void multiply(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(a.rows) || y.size() != x.size()) {
    throw std::invalid_argument("multiply: dimension mismatch");
  }
  kernels::omp::spmv(a, x, y);
}

std::vector<double> multiply(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(x.size());
  multiply(a, x, y);
  return y;
}

double quadratic_form(const CsrMatrix& a, std::span<const double> x) {
  const auto ax = multiply(a, x);
  return kernels::omp::dot(x, ax);
}

void write_coordinate(const CsrMatrix& a, std::ostream& out) {
  char line[96];
  for (std::int32_t i = 0; i < a.rows; ++i) {
    for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      std::snprintf(line, sizeof line, "%d %d %.17g\n", i, a.cols[k], a.values[k]);
      out << line;
    }
  }
}

}  // namespace membrane
