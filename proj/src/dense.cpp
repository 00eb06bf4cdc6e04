#include "gkb/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& a) {
  DenseMatrix d(a.n_rows, a.n_cols);
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      d.at(i, a.col_indices[k]) = a.values[k];
    }
  }
  return d;
}

Vector dense_matvec(const DenseMatrix& A, const Vector& x) {
  if (A.n_cols != x.size()) throw DimensionError("dense_matvec: shape mismatch");
  Vector y(A.n_rows, 0.0);
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < A.n_cols; ++j) s += A.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

CholeskyFactor::CholeskyFactor(const DenseMatrix& M) : n_(M.n_rows) {
  if (M.n_rows != M.n_cols) throw DimensionError("cholesky: matrix not square");
  lower_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = M.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_[i * n_ + k] * lower_[j * n_ + k];
      if (i == j) {
        if (s <= 0.0) {
          throw SpdError("cholesky: non-positive pivot " + std::to_string(s) +
                         " at index " + std::to_string(i));
        }
        lower_[i * n_ + i] = std::sqrt(s);
      } else {
        lower_[i * n_ + j] = s / lower_[j * n_ + j];
      }
    }
  }
}

Vector CholeskyFactor::solve(const Vector& b) const {
  if (b.size() != n_) throw DimensionError("cholesky solve: rhs length mismatch");
  Vector y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_[i * n_ + k] * y[k];
    y[i] = s / lower_[i * n_ + i];
  }
  Vector x(n_);
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n_; ++k) s -= lower_[k * n_ + ii] * x[k];
    x[ii] = s / lower_[ii * n_ + ii];
  }
  return x;
}

Vector dense_cholesky_solve(const DenseMatrix& M, const Vector& b) {
  return CholeskyFactor(M).solve(b);
}

EigenDecomposition jacobi_eigen(const DenseMatrix& S, std::size_t max_sweeps) {
  if (S.n_rows != S.n_cols) throw DimensionError("jacobi_eigen: not square");
  const std::size_t n = S.n_rows;
  std::vector<double> a(S.values);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };
  double fro = 0.0;
  for (double x : a) fro += x * x;
  fro = std::sqrt(fro);
  const double tol = 1e-15 * (fro > 0 ? fro : 1.0);

  std::size_t sweep = 0;
  for (; sweep < max_sweeps && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  if (sweep == max_sweeps && off_norm() > 1e-12 * (fro > 0 ? fro : 1.0)) {
    throw BreakdownError("jacobi_eigen: no convergence in " +
                         std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double di = a[i * n + i], dj = a[j * n + j];
    if (di != dj) return di < dj;
    return i < j;
  });

  EigenDecomposition e;
  e.eigenvalues.resize(n);
  e.eigenvectors.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c = order[r];
    e.eigenvalues[r] = a[c * n + c];
    Vector& vec = e.eigenvectors[r];
    vec.resize(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v[k * n + c];
  }
  return e;
}

double eigen_min(const DenseMatrix& S) { return jacobi_eigen(S).eigenvalues.front(); }

double eigen_max(const DenseMatrix& S) { return jacobi_eigen(S).eigenvalues.back(); }

}  // namespace gkb
