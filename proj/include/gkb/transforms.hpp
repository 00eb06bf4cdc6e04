#ifndef GKB_TRANSFORMS_HPP
#define GKB_TRANSFORMS_HPP

#include <cstddef>
#include <utility>

#include "gkb/dense.hpp"
#include "gkb/gkb.hpp"
#include "gkb/saddle_system.hpp"

namespace gkb {

/// Augmented Lagrangian transform: M' = M + eta_new * A A^T,
/// g' = g + eta_new * A r, eta set to eta_new. The saddle solution (w, p)
/// is unchanged. Throws CapacityError when the sparse product exceeds
/// nnz_cap.
SaddleSystem augment(const SaddleSystem& system, double eta_new,
                     std::size_t nnz_cap = 10'000'000);

/// Dense Schur complement S = A^T M^{-1} A, symmetrized as (S + S^T)/2.
DenseMatrix schur_dense(const SaddleSystem& system, std::size_t dense_cap = 20000);

/// Smallest eigendirections of the pencil S v = lambda N v, N = (1/eta) I.
struct DeflationBasis {
  std::size_t k_defl = 0;
  std::vector<double> eigenvalues;   // generalized eigenvalues, ascending
  std::vector<Vector> eigenvectors;  // N-orthonormal
};

/// Removes the components of b along the k_defl smallest eigendirections
/// of the Schur pencil:  b_defl = b - sum_i (v_i^T b) N v_i / (v_i^T N v_i).
std::pair<DeflationBasis, Vector> deflate(const SaddleSystem& system, const Vector& b,
                                          std::size_t k_defl,
                                          std::size_t dense_cap = 20000);

/// Coarse correction carried by the deflated directions:
/// p_corr = sum_i v_i (v_i^T b) / lambda_i, u_corr = -M^{-1} A p_corr at
/// tolerance tau. Throws RankError on a non-positive eigenvalue.
std::pair<Vector, Vector> deflation_correction(const DeflationBasis& basis,
                                               const Vector& b,
                                               const SaddleSystem& system,
                                               const InnerSolver& inner, double tau);

/// Combines a deflated-rhs GKB solution with the coarse correction. With
/// the dual sign convention of the bidiagonalization (p solves
/// [M A; A^T 0][u; p] = [0; b]), the correction enters with a minus sign.
void apply_deflation_correction(Vector& u, Vector& p, const Vector& u_corr,
                                const Vector& p_corr);

/// End-to-end deflated solve: transform, project the rhs, run GKB on the
/// deflated system, add back the coarse correction.
struct DeflatedSolveResult {
  GkbResult run;          // the deflated-rhs run (log, state)
  DeflationBasis basis;
  Vector u;               // corrected transformed primal variable
  Vector p;               // corrected dual variable
};

DeflatedSolveResult deflated_solve(const SaddleSystem& system, std::size_t k_defl,
                                   const GkbOptions& options, const PolicyFn& policy,
                                   const InnerSolver& inner,
                                   std::size_t dense_cap = 20000);

/// Direct dense solve of the full block system via the Schur complement;
/// generation-time oracle for small systems. Returns (w, p).
std::pair<Vector, Vector> solve_saddle_dense(const SaddleSystem& system,
                                             std::size_t dense_cap = 20000);

}  // namespace gkb

#endif
