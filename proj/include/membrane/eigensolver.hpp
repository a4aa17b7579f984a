#pragma once

#include <memory>
#include <span>
#include <vector>

#include "membrane/sparse.hpp"

namespace membrane {

// Smallest eigenpair of K u = lambda M u, u in the space K and M act on.
struct EigenPair {
  double lambda = 0.0;
  std::vector<double> u;   // u^T M u = 1, M-weighted mean positive
  double residual = 0.0;   // ||K u - lambda M u|| / ||M u||
  int iterations = 0;
  bool converged = false;
};

enum class InnerSolver {
  kCholesky,           // sparse LDL^T, symbolic analysis reused across calls
  kConjugateGradient,  // Jacobi-preconditioned CG on the OpenMP kernels
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 500;
  InnerSolver inner = InnerSolver::kCholesky;
};

// Inverse power iteration. One instance keeps the factorization workspace,
// so solving a sequence of pencils with a common sparsity pattern (the
// density optimizer) pays for the symbolic analysis once. Not thread-safe;
// use one instance per thread.
class InverseIteration {
 public:
  InverseIteration();
  ~InverseIteration();
  InverseIteration(InverseIteration&&) noexcept;
  InverseIteration& operator=(InverseIteration&&) noexcept;

  // `start` may be empty (all-ones start vector). Throws
  // std::invalid_argument on dimension mismatch or a zero start vector and
  // NumericalFailure if K is not positive definite. Running out of
  // iterations is not an error: the best pair is returned with
  // converged == false.
  EigenPair solve(const CsrMatrix& k, const CsrMatrix& m, const EigenOptions& options,
                  std::span<const double> start = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

EigenPair smallest_eigenpair(const CsrMatrix& k, const CsrMatrix& m, double tol = 1e-10,
                             int max_iter = 500);

// (u^T K u) / (u^T M u); throws std::invalid_argument for u == 0.
double rayleigh_quotient(std::span<const double> u, const CsrMatrix& k, const CsrMatrix& m);

}  // namespace membrane
