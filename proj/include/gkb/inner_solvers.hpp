#ifndef GKB_INNER_SOLVERS_HPP
#define GKB_INNER_SOLVERS_HPP

#include <cstddef>
#include <memory>
#include <utility>

#include "gkb/dense.hpp"
#include "gkb/sparse.hpp"
#include "gkb/vector_ops.hpp"

namespace gkb {

/// Outcome of one inner solve M w = rhs.
struct InnerReport {
  std::size_t iterations = 0;
  double achieved_rel_residual = 0.0;
  bool converged = false;
  /// Loop matvecs only; excludes the residual verifications used for
  /// the stopping check and the final report.
  std::size_t matvecs = 0;
};

/// Unpreconditioned conjugate gradients on an SPD matrix.
///
/// Stops when the recursively updated residual satisfies
/// ||rhs - M x||_2 / ||rhs||_2 <= tol; the criterion is then verified
/// against the true residual and iteration resumes (with residual
/// replacement) if verification fails. A zero rhs returns x = 0 in
/// zero iterations.
std::pair<Vector, InnerReport> cg_solve(const SparseMatrix& M, const Vector& rhs,
                                        double tol, std::size_t maxit,
                                        const Vector& x0);
std::pair<Vector, InnerReport> cg_solve(const SparseMatrix& M, const Vector& rhs,
                                        double tol, std::size_t maxit);

/// Dense Cholesky wrapped as an inner solver; iterations reported as 0.
/// Throws CapacityError when M is larger than dense_cap.
std::pair<Vector, InnerReport> exact_solve(const SparseMatrix& M, const Vector& rhs,
                                           std::size_t dense_cap = 20000);

/// Inner solver bound to a fixed matrix M, callable once per outer
/// iteration with a per-call tolerance. Implementations are stateless
/// per call and safe to share across sequential solves.
class InnerSolver {
 public:
  virtual ~InnerSolver() = default;
  virtual std::pair<Vector, InnerReport> solve(const Vector& rhs, double tol) const = 0;
};

class CgInnerSolver final : public InnerSolver {
 public:
  CgInnerSolver(const SparseMatrix& M, std::size_t maxit) : m_(&M), maxit_(maxit) {}
  std::pair<Vector, InnerReport> solve(const Vector& rhs, double tol) const override {
    return cg_solve(*m_, rhs, tol, maxit_);
  }

 private:
  const SparseMatrix* m_;
  std::size_t maxit_;
};

/// Factors M once; every call is a pair of triangular solves.
class ExactInnerSolver final : public InnerSolver {
 public:
  explicit ExactInnerSolver(const SparseMatrix& M, std::size_t dense_cap = 20000);
  std::pair<Vector, InnerReport> solve(const Vector& rhs, double tol) const override;

 private:
  std::unique_ptr<CholeskyFactor> factor_;
};

}  // namespace gkb

#endif
