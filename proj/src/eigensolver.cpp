#include "membrane/eigensolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

#include "membrane/errors.hpp"
#include "membrane/kernels.hpp"

namespace membrane {

namespace {

namespace k = kernels::omp;

using SparseMap = Eigen::Map<const Eigen::SparseMatrix<double, Eigen::ColMajor, std::int32_t>>;

// CSR of a symmetric matrix read as CSC is the same matrix.
SparseMap as_eigen(const CsrMatrix& a) {
  return SparseMap(a.rows, a.rows, static_cast<Eigen::Index>(a.nnz()), a.row_ptr.data(),
                   a.cols.data(), a.values.data());
}

double norm(std::span<const double> x) { return std::sqrt(k::dot(x, x)); }

// Jacobi-preconditioned conjugate gradients, warm-started from x.
void conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), ap(n), inv_diag(n);
  for (std::int32_t i = 0; i < a.rows; ++i) {
    const double d = a.at(i, i);
    if (!(d > 0.0)) throw NumericalFailure("conjugate_gradient: nonpositive diagonal");
    inv_diag[i] = 1.0 / d;
  }
  k::spmv(a, x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = k::dot(r, z);
  const double target = 1e-14 * norm(b);
  for (std::size_t it = 0; it < 20 * n + 100 && norm(r) > target; ++it) {
    k::spmv(a, p, ap);
    const double pap = k::dot(p, ap);
    if (!(pap > 0.0)) throw NumericalFailure("conjugate_gradient: matrix is not positive definite");
    const double alpha = rz / pap;
    k::axpy(alpha, p, x);
    k::axpy(-alpha, ap, r);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = k::dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
}

}  // namespace

struct InverseIteration::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double, Eigen::ColMajor, std::int32_t>> ldlt;
  CsrMatrix analyzed;  // pattern of the last symbolic analysis
  bool has_pattern = false;
};

InverseIteration::InverseIteration() : impl_(std::make_unique<Impl>()) {}
InverseIteration::~InverseIteration() = default;
InverseIteration::InverseIteration(InverseIteration&&) noexcept = default;
InverseIteration& InverseIteration::operator=(InverseIteration&&) noexcept = default;

EigenPair InverseIteration::solve(const CsrMatrix& kmat, const CsrMatrix& mmat,
                                  const EigenOptions& options, std::span<const double> start) {
  const auto n = static_cast<std::size_t>(kmat.rows);
  if (mmat.rows != kmat.rows) throw std::invalid_argument("eigen solve: K and M dimensions differ");
  if (n == 0) throw std::invalid_argument("eigen solve: empty pencil");
  if (!start.empty() && start.size() != n) {
    throw std::invalid_argument("eigen solve: start vector has the wrong dimension");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw std::invalid_argument("eigen solve: tol must be positive and max_iter >= 1");
  }

  if (options.inner == InnerSolver::kCholesky) {
    const auto kview = as_eigen(kmat);
    if (!impl_->has_pattern || !impl_->analyzed.same_pattern(kmat)) {
      impl_->ldlt.analyzePattern(kview);
      impl_->analyzed = kmat;
      impl_->has_pattern = true;
    }
    impl_->ldlt.factorize(kview);
    if (impl_->ldlt.info() != Eigen::Success || (impl_->ldlt.vectorD().array() <= 0.0).any()) {
      throw NumericalFailure("eigen solve: stiffness matrix is not positive definite");
    }
  }

  std::vector<double> x(start.begin(), start.end());
  if (x.empty()) x.assign(n, 1.0);
  std::vector<double> mx(n), kx(n), y(n, 0.0), r(n);

  const auto m_normalize = [&](std::vector<double>& v) {
    k::spmv(mmat, v, mx);
    const double vmv = k::dot(v, mx);
    if (!(vmv > 0.0)) throw std::invalid_argument("eigen solve: start vector is zero");
    const double s = 1.0 / std::sqrt(vmv);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] *= s;
      mx[i] *= s;
    }
  };
  m_normalize(x);

  EigenPair best;
  for (int it = 1; it <= options.max_iter; ++it) {
    if (options.inner == InnerSolver::kCholesky) {
      Eigen::Map<const Eigen::VectorXd> rhs(mx.data(), static_cast<Eigen::Index>(n));
      Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n)) = impl_->ldlt.solve(rhs);
    } else {
      conjugate_gradient(kmat, mx, y);
    }
    x = y;
    m_normalize(x);
    k::spmv(kmat, x, kx);
    const double lambda = k::dot(x, kx);
    for (std::size_t i = 0; i < n; ++i) r[i] = kx[i] - lambda * mx[i];
    const double residual = norm(r) / norm(mx);

    if (it == 1 || residual < best.residual) {
      best.lambda = lambda;
      best.u = x;
      best.residual = residual;
    }
    best.iterations = it;
    if (residual < options.tol) {
      best.converged = true;
      break;
    }
    // CG is warm-started from the previous iterate scaled to the new rhs.
    y = x;
    for (double& v : y) v /= lambda;
  }

  std::vector<double> mu(n);
  k::spmv(mmat, best.u, mu);
  double weighted_mean = 0.0;
  for (double v : mu) weighted_mean += v;
  if (weighted_mean < 0.0) {
    for (double& v : best.u) v = -v;
  }
  return best;
}

EigenPair smallest_eigenpair(const CsrMatrix& k, const CsrMatrix& m, double tol, int max_iter) {
  InverseIteration solver;
  return solver.solve(k, m, {tol, max_iter, InnerSolver::kCholesky});
}

double rayleigh_quotient(std::span<const double> u, const CsrMatrix& kmat, const CsrMatrix& mmat) {
  if (u.size() != static_cast<std::size_t>(kmat.rows) || mmat.rows != kmat.rows) {
    throw std::invalid_argument("rayleigh_quotient: dimension mismatch");
  }
  const double denominator = quadratic_form(mmat, u);
  if (!(denominator > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero vector");
  return quadratic_form(kmat, u) / denominator;
}

}  // namespace membrane
