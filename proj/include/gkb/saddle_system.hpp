#ifndef GKB_SADDLE_SYSTEM_HPP
#define GKB_SADDLE_SYSTEM_HPP

#include "gkb/sparse.hpp"
#include "gkb/vector_ops.hpp"

namespace gkb {

/// Two-by-two block system
///
///   [ M   A ] [ w ]   [ g ]
///   [ A^T 0 ] [ p ] = [ r ]
///
/// with M (m x m) symmetric positive definite, A (m x n) of full column
/// rank, and the dual-space weight N = (1/eta) * I carried implicitly
/// through eta > 0.
struct SaddleSystem {
  SparseMatrix M;
  SparseMatrix A;
  double eta = 1.0;
  Vector g;
  Vector r;

  std::size_t primal_dim() const { return M.n_rows; }
  std::size_t dual_dim() const { return A.n_cols; }

  /// Checks dimensions, eta > 0, CSR invariants, and symmetry of M
  /// (1e-12 relative). Run once at construction time; operations assume
  /// a validated system.
  void validate() const;
};

/// ||q||_N with N = (1/eta) I.
double n_norm(const Vector& q, double eta);

/// ||b||_{N^{-1}} with N = (1/eta) I.
double n_inv_norm(const Vector& b, double eta);

}  // namespace gkb

#endif
