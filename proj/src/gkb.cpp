#include "gkb/gkb.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

void GkbOptions::validate() const {
  if (!(outer_tol > 0.0 && outer_tol < 1.0)) {
    throw ConfigError("gkb options: outer_tol must lie in (0,1)");
  }
  if (delay < 1) throw ConfigError("gkb options: delay must be >= 1");
  if (!(tol_cap > 0.0 && tol_cap <= 1.0)) {
    throw ConfigError("gkb options: tol_cap must lie in (0,1]");
  }
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("gkb options: tau must lie in (0,1)");
  if (inner_maxit < 1) throw ConfigError("gkb options: inner_maxit must be >= 1");
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "maxit";
    case SolveStatus::BreakdownConverged: return "breakdown-converged";
  }
  return "unknown";
}

PolicyFn make_policy_fn(RelaxPolicy& policy) {
  policy.validate();
  return [&policy](const PolicyInputs& in) { return next_tolerance(policy, in); };
}

TransformResult transform_rhs(const SaddleSystem& system, const InnerSolver& inner,
                              double tau) {
  TransformResult out;
  bool g_zero = true;
  for (double v : system.g) {
    if (v != 0.0) {
      g_zero = false;
      break;
    }
  }
  if (g_zero) {
    out.shift = zeros(system.primal_dim());
    out.b = system.r;
    out.report.converged = true;
    return out;
  }
  auto [shift, rep] = inner.solve(system.g, tau);
  require_finite(shift, "transform_rhs shift");
  out.shift = std::move(shift);
  out.report = rep;
  out.b = sub(system.r, spmv_t(system.A, out.shift));
  return out;
}

GkbState gkb_init(const SaddleSystem& system, const Vector& b,
                  const InnerSolver& inner, double inner_tol, bool record_basis) {
  const double eta = system.eta;
  GkbState s;
  s.beta1 = n_inv_norm(b, eta);
  if (s.beta1 == 0.0) {
    throw BreakdownError("gkb_init: zero right-hand side; the solution is u = 0");
  }
  s.q = scale(eta / s.beta1, b);  // N^{-1} b / beta_1
  auto [w, rep] = inner.solve(spmv(system.A, s.q), inner_tol);
  require_finite(w, "gkb_init w");
  const double alpha1 = weighted_norm(w, system.M);
  if (alpha1 == 0.0) {
    throw BreakdownError("gkb_init: alpha_1 = 0, A q_1 lies in the kernel of the solve");
  }
  s.v = scale(1.0 / alpha1, w);
  s.alpha.push_back(alpha1);
  s.beta.push_back(s.beta1);
  const double zeta1 = s.beta1 / alpha1;
  s.zeta.push_back(zeta1);
  s.d_vec = scale(1.0 / alpha1, s.q);
  s.u = scale(zeta1, s.v);
  s.p = scale(-zeta1, s.d_vec);
  s.k = 1;
  s.cum_inner = rep.iterations;
  s.tol_history.push_back(inner_tol);
  if (record_basis) {
    s.V.push_back(s.v);
    s.Q.push_back(s.q);
  }
  return s;
}

void gkb_step(GkbState& state, const SaddleSystem& system, const InnerSolver& inner,
              double inner_tol) {
  const double eta = system.eta;
  const double alpha_k = state.alpha.back();

  // g' = N^{-1}(A^T v_k - alpha_k N q_k) = eta A^T v_k - alpha_k q_k
  Vector gvec = spmv_t(system.A, state.v);
  for (std::size_t i = 0; i < gvec.size(); ++i) {
    gvec[i] = eta * gvec[i] - alpha_k * state.q[i];
  }
  const double beta_next = n_norm(gvec, eta);
  if (!(beta_next > 1e-14 * state.beta1)) {
    state.lucky_breakdown = true;  // exact subspace found; iterates stand
    return;
  }
  Vector q_next = scale(1.0 / beta_next, gvec);

  // w = M^{-1}(A q_{k+1} - beta_{k+1} M v_k)
  Vector rhs = spmv(system.A, q_next);
  const Vector mv = spmv(system.M, state.v);
  axpy_inplace(-beta_next, mv, rhs);
  auto [w, rep] = inner.solve(rhs, inner_tol);
  require_finite(w, "gkb_step w");
  const double alpha_next = weighted_norm(w, system.M);
  if (alpha_next == 0.0) {
    throw BreakdownError("gkb_step: alpha_{k+1} = 0 at k = " +
                         std::to_string(state.k));
  }
  Vector v_next = scale(1.0 / alpha_next, w);

  const double zeta_next = -(beta_next / alpha_next) * state.zeta.back();
  // d_{k+1} = (q_{k+1} - beta_{k+1} d_k) / alpha_{k+1}
  Vector d_next(q_next.size());
  for (std::size_t i = 0; i < d_next.size(); ++i) {
    d_next[i] = (q_next[i] - beta_next * state.d_vec[i]) / alpha_next;
  }
  axpy_inplace(zeta_next, v_next, state.u);
  axpy_inplace(-zeta_next, d_next, state.p);

  state.v = std::move(v_next);
  state.q = std::move(q_next);
  state.d_vec = std::move(d_next);
  state.alpha.push_back(alpha_next);
  state.beta.push_back(beta_next);
  state.zeta.push_back(zeta_next);
  state.cum_inner += rep.iterations;
  state.tol_history.push_back(inner_tol);
  state.k++;
  if (!state.V.empty() || !state.Q.empty()) {
    state.V.push_back(state.v);
    state.Q.push_back(state.q);
  }
}

std::optional<double> lower_bound_rel(const std::vector<double>& zeta, std::size_t k,
                                      std::size_t d) {
  if (k < d || zeta.size() < k) return std::nullopt;
  double tail = 0.0;
  for (std::size_t i = k - d; i < k; ++i) tail += zeta[i] * zeta[i];
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += zeta[i] * zeta[i];
  if (total == 0.0) return 0.0;
  return std::sqrt(tail / total);
}

double dual_residual(const SaddleSystem& system, const Vector& b, const Vector& u) {
  return norm2(sub(b, spmv_t(system.A, u)));
}

Vector recover_w(const Vector& u, const Vector& shift) { return add(u, shift); }

double true_error_M(const Vector& u, const Vector& u_star, const SparseMatrix& M) {
  return weighted_norm(sub(u, u_star), M);
}

GkbResult gkb_solve_rhs(const SaddleSystem& system, const Vector& b,
                        const Vector& shift, std::size_t transform_iters,
                        const GkbOptions& options, const PolicyFn& policy,
                        const InnerSolver& inner) {
  options.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = system.dual_dim();
  const std::size_t maxit = options.maxit > 0 ? options.maxit : 10 * n;
  const bool need_residual =
      options.policy_uses_residual || options.track_dual_residual;

  GkbResult out;
  out.shift = shift;
  out.log.transform_inner_iters = transform_iters;
  out.log.cum_inner = transform_iters;

  std::optional<Vector> u_star;  // transformed-space exact solution
  if (options.primal_exact) {
    u_star = sub(*options.primal_exact, shift);
  }

  if (norm2(b) == 0.0) {
    out.u = zeros(system.primal_dim());
    out.p = zeros(n);
    out.log.converged = true;
    out.log.status = SolveStatus::Converged;
    out.log.final_lower_bound = 0.0;
    out.log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  // tolerance for the first solve; r_0 = b since u_0 = 0
  PolicyInputs in;
  in.k = 1;
  if (need_residual) in.residual_norm = norm2(b);
  double tol = policy(in);

  GkbState state = gkb_init(system, b, inner, tol, options.record_basis);
  out.log.cum_inner = transform_iters + state.cum_inner;
  std::size_t logged_inner = state.cum_inner;
  std::optional<double> resid;
  if (need_residual) resid = dual_residual(system, b, state.u);
  double xi_bar = 1.0;
  {
    IterationRecord row;
    row.k = 1;
    row.inner_iterations = state.cum_inner;
    row.inner_tol_used = tol;
    row.zeta_abs = std::abs(state.zeta.back());
    row.lower_bound = xi_bar;
    row.dual_residual_norm = resid;
    if (u_star) row.true_error = true_error_M(state.u, *u_star, system.M);
    out.log.rows.push_back(row);
  }

  SolveStatus status = SolveStatus::MaxIterations;
  while (true) {
    if (const auto lb = lower_bound_rel(state.zeta, state.k, options.delay)) {
      xi_bar = *lb;
      if (!out.log.rows.empty()) out.log.rows.back().lower_bound = xi_bar;
    }
    if (state.k > options.delay && xi_bar <= options.outer_tol) {
      status = SolveStatus::Converged;
      break;
    }
    if (state.k >= maxit) {
      status = SolveStatus::MaxIterations;
      break;
    }

    in = PolicyInputs{};
    in.k = state.k + 1;
    in.zeta_hist.reserve(state.zeta.size());
    for (double z : state.zeta) in.zeta_hist.push_back(std::abs(z));
    if (need_residual) {
      if (!resid) resid = dual_residual(system, b, state.u);
      in.residual_norm = resid;
    }
    in.prev_tol = state.tol_history.back();
    tol = policy(in);

    gkb_step(state, system, inner, tol);
    if (state.lucky_breakdown) {
      status = SolveStatus::BreakdownConverged;
      break;
    }
    const std::size_t step_inner = state.cum_inner - logged_inner;
    logged_inner = state.cum_inner;
    out.log.cum_inner = transform_iters + state.cum_inner;
    resid.reset();
    if (need_residual) resid = dual_residual(system, b, state.u);

    IterationRecord row;
    row.k = state.k;
    row.inner_iterations = step_inner;
    row.inner_tol_used = tol;
    row.zeta_abs = std::abs(state.zeta.back());
    row.lower_bound = xi_bar;
    row.dual_residual_norm = resid;
    if (u_star) row.true_error = true_error_M(state.u, *u_star, system.M);
    out.log.rows.push_back(row);
  }

  out.u = state.u;
  out.p = state.p;
  out.log.status = status;
  out.log.converged = status != SolveStatus::MaxIterations;
  out.log.final_lower_bound = xi_bar;
  out.log.cum_inner = transform_iters + state.cum_inner;
  out.state = std::move(state);
  out.log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

GkbResult gkb_solve(const SaddleSystem& system, const GkbOptions& options,
                    const PolicyFn& policy, const InnerSolver& inner) {
  options.validate();
  TransformResult tr = transform_rhs(system, inner, options.tau);
  return gkb_solve_rhs(system, tr.b, tr.shift, tr.report.iterations, options, policy,
                       inner);
}

std::string runlog_to_csv(const RunLog& log) {
  std::string out =
      "k,inner_iters,cum_inner,tol_used,zeta_abs,lower_bound,dual_residual,"
      "true_error\n";
  char buf[512];
  std::snprintf(buf, sizeof(buf), "0,%zu,%zu,,,,,\n", log.transform_inner_iters,
                log.transform_inner_iters);
  out += buf;
  std::size_t cum = log.transform_inner_iters;
  for (const IterationRecord& row : log.rows) {
    cum += row.inner_iterations;
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.17g,%.17g,%.17g,", row.k,
                  row.inner_iterations, cum, row.inner_tol_used, row.zeta_abs,
                  row.lower_bound);
    out += buf;
    if (row.dual_residual_norm) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.dual_residual_norm);
      out += buf;
    }
    out += ',';
    if (row.true_error) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.true_error);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace gkb
