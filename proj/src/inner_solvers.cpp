#include "gkb/inner_solvers.hpp"

#include <cmath>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

std::pair<Vector, InnerReport> cg_solve(const SparseMatrix& M, const Vector& rhs,
                                        double tol, std::size_t maxit) {
  return cg_solve(M, rhs, tol, maxit, Vector(rhs.size(), 0.0));
}

std::pair<Vector, InnerReport> cg_solve(const SparseMatrix& M, const Vector& rhs,
                                        double tol, std::size_t maxit,
                                        const Vector& x0) {
  if (M.n_rows != M.n_cols) throw DimensionError("cg_solve: M not square");
  if (M.n_rows != rhs.size()) throw DimensionError("cg_solve: rhs length mismatch");
  if (x0.size() != rhs.size()) throw DimensionError("cg_solve: x0 length mismatch");
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("cg_solve: tol must lie in (0,1)");
  if (maxit < 1) throw ConfigError("cg_solve: maxit must be >= 1");

  InnerReport rep;
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    rep.converged = true;
    return {Vector(rhs.size(), 0.0), rep};
  }

  Vector x = x0;
  bool x_nonzero = false;
  for (double v : x0) {
    if (v != 0.0) x_nonzero = true;
  }
  Vector r = rhs;
  if (x_nonzero) {
    const Vector mx = spmv(M, x);
    rep.matvecs++;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= mx[i];
  }
  Vector p = r;
  double rr = dot(r, r);

  const auto true_residual = [&](const Vector& xx) {
    Vector t = spmv(M, xx);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rhs[i] - t[i];
    return t;
  };

  while (rep.iterations < maxit) {
    const Vector q = spmv(M, p);
    rep.matvecs++;
    const double pq = dot(p, q);
    if (pq <= 0.0) {
      throw SpdError("cg_solve: p^T M p = " + std::to_string(pq) +
                     " <= 0, matrix is not positive definite");
    }
    const double alpha = rr / pq;
    axpy_inplace(alpha, p, x);
    axpy_inplace(-alpha, q, r);
    const double rr_new = dot(r, r);
    if (!std::isfinite(rr_new)) throw BreakdownError("cg_solve: NaN in iterates");
    rep.iterations++;
    if (std::sqrt(rr_new) <= tol * bnorm) {
      // verify against the true residual before declaring convergence
      Vector rt = true_residual(x);
      const double tn = norm2(rt) / bnorm;
      if (tn <= tol) {
        rep.achieved_rel_residual = tn;
        rep.converged = true;
        return {std::move(x), rep};
      }
      // residual replacement, then continue from the exact residual
      r = std::move(rt);
      rr = dot(r, r);
      p = r;
      continue;
    }
    const double beta = rr_new / rr;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    rr = rr_new;
  }
  rep.achieved_rel_residual = norm2(true_residual(x)) / bnorm;
  rep.converged = rep.achieved_rel_residual <= tol;
  return {std::move(x), rep};
}

std::pair<Vector, InnerReport> exact_solve(const SparseMatrix& M, const Vector& rhs,
                                           std::size_t dense_cap) {
  if (M.n_rows > dense_cap) {
    throw CapacityError("exact_solve: dimension " + std::to_string(M.n_rows) +
                        " exceeds dense cap " + std::to_string(dense_cap) +
                        "; use the CG inner solver instead");
  }
  Vector x = dense_cholesky_solve(DenseMatrix::from_sparse(M), rhs);
  InnerReport rep;
  rep.converged = true;
  const double bnorm = norm2(rhs);
  if (bnorm > 0.0) {
    const Vector mx = spmv(M, x);
    rep.achieved_rel_residual = norm2(sub(rhs, mx)) / bnorm;
  }
  return {std::move(x), rep};
}

ExactInnerSolver::ExactInnerSolver(const SparseMatrix& M, std::size_t dense_cap) {
  if (M.n_rows > dense_cap) {
    throw CapacityError("ExactInnerSolver: dimension " + std::to_string(M.n_rows) +
                        " exceeds dense cap " + std::to_string(dense_cap) +
                        "; use the CG inner solver instead");
  }
  factor_ = std::make_unique<CholeskyFactor>(DenseMatrix::from_sparse(M));
}

std::pair<Vector, InnerReport> ExactInnerSolver::solve(const Vector& rhs,
                                                       double /*tol*/) const {
  InnerReport rep;
  rep.converged = true;
  return {factor_->solve(rhs), rep};
}

}  // namespace gkb
