#ifndef GKB_MATRIX_MARKET_HPP
#define GKB_MATRIX_MARKET_HPP

#include <string>

#include "gkb/sparse.hpp"
#include "gkb/vector_ops.hpp"

namespace gkb {

/// Reads a Matrix Market file into CSR form.
///
/// Accepted headers: "%%MatrixMarket matrix coordinate real general",
/// the symmetric variant (lower-triangle storage, expanded to full on
/// read), and "%%MatrixMarket matrix array real general" for dense
/// content. Indices are 1-based. Parse failures report the offending
/// line number.
SparseMatrix mm_read_matrix(const std::string& path);

/// Reads a Matrix Market file holding a single column (array format,
/// or coordinate with n_cols = 1).
Vector mm_read_vector(const std::string& path);

/// Writes coordinate real general format, 1-based indices, values with
/// 17 significant digits so that a read-back reproduces the matrix
/// exactly.
void mm_write(const std::string& path, const SparseMatrix& a);

/// Writes array real general format (m x 1).
void mm_write(const std::string& path, const Vector& v);

}  // namespace gkb

#endif
