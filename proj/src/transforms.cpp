#include "gkb/transforms.hpp"

#include <cmath>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

SaddleSystem augment(const SaddleSystem& system, double eta_new, std::size_t nnz_cap) {
  if (!(eta_new > 0.0)) throw ConfigError("augment: eta_new must be positive");
  const SparseMatrix at = transpose(system.A);
  SparseMatrix aat = sparse_matmul(system.A, at, nnz_cap);
  // enforce exact value symmetry of the product
  aat = sparse_add(aat, transpose(aat), 1.0);
  for (double& v : aat.values) v *= 0.5;

  SaddleSystem out;
  out.M = sparse_add(system.M, aat, eta_new);
  out.A = system.A;
  out.eta = eta_new;
  out.g = axpy(eta_new, spmv(system.A, system.r), system.g);
  out.r = system.r;
  return out;
}

DenseMatrix schur_dense(const SaddleSystem& system, std::size_t dense_cap) {
  const std::size_t m = system.primal_dim();
  const std::size_t n = system.dual_dim();
  if (m > dense_cap) {
    throw CapacityError("schur_dense: primal dimension " + std::to_string(m) +
                        " exceeds dense cap " + std::to_string(dense_cap));
  }
  const CholeskyFactor chol(DenseMatrix::from_sparse(system.M));
  const DenseMatrix a_dense = DenseMatrix::from_sparse(system.A);
  DenseMatrix s(n, n);
  Vector col(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) col[i] = a_dense.at(i, j);
    const Vector x = chol.solve(col);      // M^{-1} A e_j
    const Vector sj = spmv_t(system.A, x);  // A^T M^{-1} A e_j
    for (std::size_t i = 0; i < n; ++i) s.at(i, j) = sj[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (s.at(i, j) + s.at(j, i));
      s.at(i, j) = v;
      s.at(j, i) = v;
    }
  }
  return s;
}

std::pair<DeflationBasis, Vector> deflate(const SaddleSystem& system, const Vector& b,
                                          std::size_t k_defl, std::size_t dense_cap) {
  const std::size_t n = system.dual_dim();
  if (k_defl >= n && k_defl != 0) {
    throw ConfigError("deflate: k_defl must be smaller than the dual dimension");
  }
  DeflationBasis basis;
  basis.k_defl = k_defl;
  if (k_defl == 0) return {std::move(basis), b};

  // S v = lambda N v with N = (1/eta) I is the standard problem for eta*S
  DenseMatrix s = schur_dense(system, dense_cap);
  for (double& v : s.values) v *= system.eta;
  const EigenDecomposition eig = jacobi_eigen(s);

  const double sqrt_eta = std::sqrt(system.eta);
  Vector b_defl = b;
  for (std::size_t i = 0; i < k_defl; ++i) {
    basis.eigenvalues.push_back(eig.eigenvalues[i]);
    // Euclidean-orthonormal vector scaled to unit N-norm
    basis.eigenvectors.push_back(scale(sqrt_eta, eig.eigenvectors[i]));
    const Vector& v = basis.eigenvectors.back();
    // b -= (v^T b) N v / (v^T N v); the denominator is 1 by construction
    const double coeff = dot(v, b_defl) / system.eta;
    axpy_inplace(-coeff, v, b_defl);
  }
  return {std::move(basis), std::move(b_defl)};
}

std::pair<Vector, Vector> deflation_correction(const DeflationBasis& basis,
                                               const Vector& b,
                                               const SaddleSystem& system,
                                               const InnerSolver& inner, double tau) {
  Vector p_corr = zeros(system.dual_dim());
  for (std::size_t i = 0; i < basis.k_defl; ++i) {
    const double lambda = basis.eigenvalues[i];
    if (!(lambda > 0.0)) {
      throw RankError("deflation_correction: non-positive eigenvalue " +
                      std::to_string(lambda));
    }
    const Vector& v = basis.eigenvectors[i];
    axpy_inplace(dot(v, b) / lambda, v, p_corr);
  }
  Vector u_corr = zeros(system.primal_dim());
  if (basis.k_defl > 0) {
    auto [x, rep] = inner.solve(spmv(system.A, p_corr), tau);
    (void)rep;
    u_corr = scale(-1.0, x);
  }
  return {std::move(u_corr), std::move(p_corr)};
}

void apply_deflation_correction(Vector& u, Vector& p, const Vector& u_corr,
                                const Vector& p_corr) {
  axpy_inplace(-1.0, u_corr, u);
  axpy_inplace(-1.0, p_corr, p);
}

DeflatedSolveResult deflated_solve(const SaddleSystem& system, std::size_t k_defl,
                                   const GkbOptions& options, const PolicyFn& policy,
                                   const InnerSolver& inner, std::size_t dense_cap) {
  TransformResult tr = transform_rhs(system, inner, options.tau);
  auto [basis, b_defl] = deflate(system, tr.b, k_defl, dense_cap);
  DeflatedSolveResult out;
  out.run = gkb_solve_rhs(system, b_defl, tr.shift, tr.report.iterations, options,
                          policy, inner);
  auto [u_corr, p_corr] = deflation_correction(basis, tr.b, system, inner, options.tau);
  out.u = out.run.u;
  out.p = out.run.p;
  apply_deflation_correction(out.u, out.p, u_corr, p_corr);
  out.basis = std::move(basis);
  return out;
}

std::pair<Vector, Vector> solve_saddle_dense(const SaddleSystem& system,
                                             std::size_t dense_cap) {
  const std::size_t m = system.primal_dim();
  const std::size_t n = system.dual_dim();
  if (m > dense_cap || n > dense_cap) {
    throw CapacityError("solve_saddle_dense: system exceeds dense cap");
  }
  const CholeskyFactor chol_m(DenseMatrix::from_sparse(system.M));
  const DenseMatrix s = schur_dense(system, dense_cap);
  const CholeskyFactor chol_s(s);
  // A^T M^{-1} A p = A^T M^{-1} g - r, then w = M^{-1}(g - A p)
  const Vector minv_g = chol_m.solve(system.g);
  const Vector rhs_p = sub(spmv_t(system.A, minv_g), system.r);
  const Vector p = chol_s.solve(rhs_p);
  const Vector w = chol_m.solve(sub(system.g, spmv(system.A, p)));
  return {w, p};
}

}  // namespace gkb
