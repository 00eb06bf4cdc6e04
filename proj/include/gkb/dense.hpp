#ifndef GKB_DENSE_HPP
#define GKB_DENSE_HPP

#include <cstddef>
#include <vector>

#include "gkb/sparse.hpp"
#include "gkb/vector_ops.hpp"

namespace gkb {

/// Row-major dense matrix, used for oracle-scale computations only
/// (Schur complements, eigendecompositions, direct solves).
struct DenseMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;  // row-major, n_rows * n_cols entries

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : n_rows(r), n_cols(c), values(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return values[i * n_cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * n_cols + j]; }

  static DenseMatrix from_sparse(const SparseMatrix& a);
};

Vector dense_matvec(const DenseMatrix& A, const Vector& x);

/// Solves M x = b by Cholesky factorization. Throws SpdError on a
/// non-positive pivot.
Vector dense_cholesky_solve(const DenseMatrix& M, const Vector& b);

/// Cholesky factor cached for repeated solves against the same matrix.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const DenseMatrix& M);
  Vector solve(const Vector& b) const;
  std::size_t dim() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> lower_;  // row-major lower triangle, full storage
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;        // ascending
  std::vector<Vector> eigenvectors;       // eigenvectors[i] pairs eigenvalues[i]
};

/// Cyclic Jacobi eigendecomposition for a symmetric matrix. Deterministic
/// sweep order; eigenvectors are orthonormal to roundoff.
EigenDecomposition jacobi_eigen(const DenseMatrix& S, std::size_t max_sweeps = 60);

/// Largest/smallest eigenvalue helpers built on jacobi_eigen.
double eigen_min(const DenseMatrix& S);
double eigen_max(const DenseMatrix& S);

}  // namespace gkb

#endif
