#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace membrane {

// Compressed sparse row storage. Column indices are sorted within each row.
// Stiffness and mass matrices are stored in full (both triangles).
struct CsrMatrix {
  std::int32_t rows = 0;
  std::vector<std::int32_t> row_ptr{0};
  std::vector<std::int32_t> cols;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  double at(std::int32_t i, std::int32_t j) const;
  bool same_pattern(const CsrMatrix& other) const {
    return rows == other.rows && row_ptr == other.row_ptr && cols == other.cols;
  }
};

CsrMatrix identity_matrix(std::int32_t n);

// max |a_ij - a_ji| / max |a_ij|.
double symmetry_defect(const CsrMatrix& a);

// y = A x with the OpenMP kernel.
void multiply(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> multiply(const CsrMatrix& a, std::span<const double> x);
// x^T A x.
double quadratic_form(const CsrMatrix& a, std::span<const double> x);

// Coordinate text, one `i j value` line per stored entry, zero-based.
void write_coordinate(const CsrMatrix& a, std::ostream& out);

}  // namespace membrane
