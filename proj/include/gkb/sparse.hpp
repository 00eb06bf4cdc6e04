#ifndef GKB_SPARSE_HPP
#define GKB_SPARSE_HPP

#include <cstddef>
#include <tuple>
#include <vector>

#include "gkb/vector_ops.hpp"

namespace gkb {

/// Compressed sparse row matrix with sorted, duplicate-free column indices
/// within each row. Immutable after construction by convention; every
/// operation below is pure.
struct SparseMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_offsets;  // size n_rows + 1
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  /// Checks the CSR structural invariants; throws on violation.
  void validate() const;

  /// Entry lookup by binary search within the row; zero if not stored.
  double at(std::size_t i, std::size_t j) const;

  static SparseMatrix identity(std::size_t n);

  /// Builds a CSR matrix from (row, col, value) triplets. Duplicate
  /// coordinates are summed. Entries are sorted per row.
  static SparseMatrix from_triplets(
      std::size_t n_rows, std::size_t n_cols,
      std::vector<std::tuple<std::size_t, std::size_t, double>> triplets);
};

/// y = A x with a fixed sequential summation order per row.
Vector spmv(const SparseMatrix& A, const Vector& x);

/// y = A^T x, accumulated in row order of A (deterministic).
Vector spmv_t(const SparseMatrix& A, const Vector& x);

SparseMatrix transpose(const SparseMatrix& A);

/// sqrt(x^T M x). Throws SpdError if the quadratic form is negative
/// beyond roundoff; tiny negative values are clamped to zero.
double weighted_norm(const Vector& x, const SparseMatrix& M);

/// C = A + c*B, patterns merged, exact sorted-merge per row.
SparseMatrix sparse_add(const SparseMatrix& A, const SparseMatrix& B, double c);

/// C = A * B. Throws CapacityError if nnz(C) would exceed nnz_cap.
SparseMatrix sparse_matmul(const SparseMatrix& A, const SparseMatrix& B,
                           std::size_t nnz_cap);

/// Largest relative asymmetry max|A_ij - A_ji| / max|A_ij|; 0 for empty.
double symmetry_defect(const SparseMatrix& A);

}  // namespace gkb

#endif
