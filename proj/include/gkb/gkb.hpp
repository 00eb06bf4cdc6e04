#ifndef GKB_GKB_HPP
#define GKB_GKB_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gkb/inner_solvers.hpp"
#include "gkb/relaxation.hpp"
#include "gkb/saddle_system.hpp"

namespace gkb {

struct GkbOptions {
  double outer_tol = 1e-6;
  std::size_t delay = 3;       // d: window of the delayed lower bound
  std::size_t maxit = 0;       // 0 means 10 * dual dimension
  double tau = 1e-8;           // base inner tolerance (transform + warm-up)
  double tol_cap = 0.1;        // ceiling for relaxed inner tolerances
  std::size_t inner_maxit = 10000;
  bool record_basis = false;   // store V and Q for diagnostics
  bool track_dual_residual = false;
  bool policy_uses_residual = false;  // set for Bouras/Simoncini-type rules
  /// Exact primal solution w* of the untransformed system, if known;
  /// enables the per-iteration true-error column of the run log.
  std::optional<Vector> primal_exact;

  void validate() const;
};

/// Everything Alg.-style iterations carry between steps. alpha/beta/zeta are
/// 1-based histories stored 0-based (zeta[0] is zeta_1).
struct GkbState {
  std::size_t k = 0;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> zeta;  // signed; policies consume magnitudes
  Vector v;      // latest v_k (M-orthonormal basis vector)
  Vector q;      // latest q_k (N-orthonormal basis vector)
  Vector d_vec;  // latest d_k of the dual update recurrence
  Vector u;      // current primal iterate (transformed variable)
  Vector p;      // current dual iterate
  std::size_t cum_inner = 0;
  std::vector<double> tol_history;
  std::vector<Vector> V;  // filled when record_basis
  std::vector<Vector> Q;
  double beta1 = 0.0;  // breakdown scale reference
  bool lucky_breakdown = false;
};

enum class SolveStatus { Converged, MaxIterations, BreakdownConverged };

std::string status_name(SolveStatus s);

struct IterationRecord {
  std::size_t k = 0;
  std::size_t inner_iterations = 0;
  double inner_tol_used = 0.0;
  double zeta_abs = 0.0;
  double lower_bound = 1.0;  // current delayed relative bound (1 until ready)
  std::optional<double> dual_residual_norm;
  std::optional<double> true_error;  // ||u_k - u*||_M when an oracle is given
};

struct RunLog {
  std::size_t transform_inner_iters = 0;
  std::vector<IterationRecord> rows;
  std::size_t cum_inner = 0;  // includes the transform solve
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  double final_lower_bound = 1.0;
  double wall_seconds = 0.0;
};

struct GkbResult {
  Vector u;  // transformed primal variable; physical w = u + shift
  Vector p;
  Vector shift;  // M^{-1} g at tolerance tau
  RunLog log;
  GkbState state;  // final state (basis included when recorded)
};

/// Policy callback: emits the inner tolerance for the iteration described
/// by the inputs. Wrap a RelaxPolicy with make_policy_fn, or supply any
/// schedule.
using PolicyFn = std::function<double(const PolicyInputs&)>;

/// Adapter binding a RelaxPolicy (kept alive by the caller) to a PolicyFn.
PolicyFn make_policy_fn(RelaxPolicy& policy);

struct TransformResult {
  Vector b;
  Vector shift;
  InnerReport report;
};

/// Moves the primal right-hand side to zero: shift = M^{-1} g at tolerance
/// tau, b = r - A^T shift. With g = 0 no inner solve is performed.
TransformResult transform_rhs(const SaddleSystem& system, const InnerSolver& inner,
                              double tau);

/// First bidiagonalization step from the transformed rhs b (nonzero).
GkbState gkb_init(const SaddleSystem& system, const Vector& b,
                  const InnerSolver& inner, double inner_tol,
                  bool record_basis = false);

/// One outer iteration: extends the bidiagonalization and updates the
/// iterates. Sets state.lucky_breakdown (leaving iterates untouched) when
/// beta_{k+1} vanishes relative to beta_1.
void gkb_step(GkbState& state, const SaddleSystem& system, const InnerSolver& inner,
              double inner_tol);

/// Delayed relative lower bound  xi_{k,d} = sqrt(sum_{i=k-d+1..k} zeta_i^2 /
/// sum_{i=1..k} zeta_i^2). Empty when k < d (not enough history).
std::optional<double> lower_bound_rel(const std::vector<double>& zeta, std::size_t k,
                                      std::size_t d);

/// ||b - A^T u||_2.
double dual_residual(const SaddleSystem& system, const Vector& b, const Vector& u);

/// Physical primal variable w = u + shift.
Vector recover_w(const Vector& u, const Vector& shift);

/// ||u - u_star||_M.
double true_error_M(const Vector& u, const Vector& u_star, const SparseMatrix& M);

/// Full solve: transform, init, iterate until the delayed lower bound
/// reaches outer_tol or maxit outer iterations.
GkbResult gkb_solve(const SaddleSystem& system, const GkbOptions& options,
                    const PolicyFn& policy, const InnerSolver& inner);

/// Solve on a caller-supplied transformed rhs (skips transform_rhs); used
/// for deflated right-hand sides. The shift is still computed so w can be
/// recovered and true errors measured.
GkbResult gkb_solve_rhs(const SaddleSystem& system, const Vector& b,
                        const Vector& shift, std::size_t transform_iters,
                        const GkbOptions& options, const PolicyFn& policy,
                        const InnerSolver& inner);

/// Serializes a run log as CSV with header
/// k,inner_iters,cum_inner,tol_used,zeta_abs,lower_bound,dual_residual,true_error.
/// Row k = 0 carries the transform solve.
std::string runlog_to_csv(const RunLog& log);

}  // namespace gkb

#endif
