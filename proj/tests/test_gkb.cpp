#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gkb/errors.hpp"
#include "gkb/gkb.hpp"
#include "gkb/problems.hpp"
#include "gkb/transforms.hpp"
#include "oracles.hpp"

using namespace gkb;

namespace {

SaddleSystem augment_for_test(const SaddleSystem& s) { return augment(s, 50.0); }

SaddleSystem tiny_system() {
  // M = I2, A = [1, 0]^T, g = 0, r = [1]; exact solution u = [1,0], p = [-1]
  SaddleSystem s;
  s.M = SparseMatrix::identity(2);
  s.A = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}});
  s.eta = 1.0;
  s.g = {0.0, 0.0};
  s.r = {1.0};
  return s;
}

RelaxPolicy constant_policy(double tau = 1e-10) {
  RelaxPolicy p;
  p.kind = PolicyKind::Constant;
  p.tau = tau;
  return p;
}

GkbResult run_exact(const SaddleSystem& sys, GkbOptions opts) {
  const ExactInnerSolver inner(sys.M);
  RelaxPolicy pol = constant_policy();
  return gkb_solve(sys, opts, make_policy_fn(pol), inner);
}

}  // namespace

TEST_CASE("system and options validation") {
  SaddleSystem s = tiny_system();
  s.eta = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.eta = 1.0;
  s.g = {1.0};  // wrong length
  CHECK_THROWS_AS(s.validate(), DimensionError);

  GkbOptions opts;
  opts.outer_tol = 2.0;
  CHECK_THROWS_AS(opts.validate(), ConfigError);
  opts.outer_tol = 1e-7;
  opts.delay = 0;
  CHECK_THROWS_AS(opts.validate(), ConfigError);
}

TEST_CASE("transform_rhs zero g short-circuits") {
  const SaddleSystem s = tiny_system();
  const ExactInnerSolver inner(s.M);
  const TransformResult tr = transform_rhs(s, inner, 1e-10);
  CHECK(tr.shift == Vector{0, 0});
  CHECK(tr.b == s.r);
  CHECK(tr.report.iterations == 0);
}

TEST_CASE("transform_rhs hand case") {
  SaddleSystem s;
  s.M = SparseMatrix::identity(1);
  s.A = SparseMatrix::identity(1);
  s.g = {2.0};
  s.r = {5.0};
  const ExactInnerSolver inner(s.M);
  const TransformResult tr = transform_rhs(s, inner, 1e-12);
  CHECK(tr.shift == Vector{2.0});
  CHECK(tr.b == Vector{3.0});
}

TEST_CASE("transform_rhs consistency with the dense block oracle") {
  const GeneratedProblem prob = gen_random_saddle(10, 4, 100.0, 5);
  const ExactInnerSolver inner(prob.system.M);
  const TransformResult tr = transform_rhs(prob.system, inner, 1e-12);
  // (u, p) of the transformed system must reproduce (w - shift, p) of the
  // original one
  auto [w_want, p_want] = oracles::solve_block(prob.system);
  auto [u_got, p_got] = oracles::solve_transformed(prob.system, tr.b);
  CHECK(oracles::rel_err(add(u_got, tr.shift), w_want) <= 1e-8);
  CHECK(oracles::rel_err(p_got, p_want) <= 1e-8);
}

TEST_CASE("gkb_init hand case") {
  const SaddleSystem s = tiny_system();
  const ExactInnerSolver inner(s.M);
  const GkbState st = gkb_init(s, s.r, inner, 1e-12);
  CHECK(st.beta.front() == doctest::Approx(1.0));
  CHECK(st.q == Vector{1.0});
  CHECK(st.alpha.front() == doctest::Approx(1.0));
  CHECK(oracles::rel_err(st.u, {1.0, 0.0}) <= 1e-14);
  CHECK(st.p[0] == doctest::Approx(-1.0));
}

TEST_CASE("gkb_init with a scaled identity N") {
  SaddleSystem s;
  s.M = SparseMatrix::identity(1);
  s.A = SparseMatrix::identity(1);
  s.eta = 4.0;
  s.g = {0.0};
  s.r = {3.0};
  const ExactInnerSolver inner(s.M);
  const GkbState st = gkb_init(s, s.r, inner, 1e-12);
  CHECK(st.beta.front() == doctest::Approx(6.0));  // sqrt(eta)*||b|| = sqrt(4*9)
  CHECK(st.q[0] == doctest::Approx(2.0));          // eta*b/beta_1
}

TEST_CASE("gkb_init normalization on a random system") {
  const GeneratedProblem prob = gen_random_saddle(12, 5, 1e3, 8);
  const ExactInnerSolver inner(prob.system.M);
  const TransformResult tr = transform_rhs(prob.system, inner, 1e-12);
  const GkbState st = gkb_init(prob.system, tr.b, inner, 1e-12);
  CHECK(weighted_norm(st.v, prob.system.M) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n_norm(st.q, prob.system.eta) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gkb_init rejects a zero rhs") {
  const SaddleSystem s = tiny_system();
  const ExactInnerSolver inner(s.M);
  CHECK_THROWS_AS(gkb_init(s, Vector{0.0}, inner, 1e-12), BreakdownError);
}

TEST_CASE("gkb_step reports lucky breakdown once the subspace is exact") {
  const SaddleSystem s = tiny_system();
  const ExactInnerSolver inner(s.M);
  GkbState st = gkb_init(s, s.r, inner, 1e-12);
  const Vector u_before = st.u;
  gkb_step(st, s, inner, 1e-12);
  CHECK(st.lucky_breakdown);
  CHECK(st.u == u_before);
}

TEST_CASE("zeta ratio identity") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.delay = 3;
  const GkbResult res = run_exact(prob.system, opts);
  const GkbState& st = res.state;
  REQUIRE(st.zeta.size() == 8);
  for (std::size_t k = 1; k < st.zeta.size(); ++k) {
    CHECK(oracles::rel_diff(std::abs(st.zeta[k] / st.zeta[k - 1]),
                            st.beta[k] / st.alpha[k]) <= 1e-15);
    CHECK(st.zeta[k] * st.zeta[k - 1] < 0.0);  // alternating signs
  }
}

TEST_CASE("zeta recurrence reconstructs bitwise from alpha and beta") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  const GkbResult res = run_exact(prob.system, opts);
  const GkbState& st = res.state;
  double z = st.beta[0] / st.alpha[0];
  CHECK(z == st.zeta[0]);
  for (std::size_t k = 1; k < st.zeta.size(); ++k) {
    z = -(st.beta[k] / st.alpha[k]) * z;
    CHECK(z == st.zeta[k]);
  }
}

TEST_CASE("full bidiagonalization reaches the exact solution") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;  // dual dimension: the bidiagonalization terminates here
  const GkbResult res = run_exact(prob.system, opts);
  auto [w_want, p_want] = oracles::solve_block(prob.system);
  CHECK(oracles::rel_err(recover_w(res.u, res.shift), w_want) <= 1e-8);
  CHECK(oracles::rel_err(res.p, p_want) <= 1e-8);
}

TEST_CASE("lower_bound_rel") {
  CHECK(!lower_bound_rel({1.0}, 1, 3).has_value());
  CHECK(*lower_bound_rel({2.0, 1.0, 1.0}, 3, 3) == doctest::Approx(1.0));
  CHECK(*lower_bound_rel({2.0, 1.0, 1.0}, 3, 2) ==
        doctest::Approx(std::sqrt(2.0 / 6.0)));
}

TEST_CASE("absolute lower bound stays below the true error") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.primal_exact = prob.u_exact;
  const GkbResult res = run_exact(prob.system, opts);
  const auto& zeta = res.state.zeta;
  const std::size_t n = zeta.size();
  for (std::size_t d : {1u, 3u}) {
    for (std::size_t k = 1; k + d + 1 <= n; ++k) {
      double tail = 0.0;
      for (std::size_t i = k; i < k + d + 1; ++i) tail += zeta[i] * zeta[i];
      const double xi = std::sqrt(tail);
      const double err = *res.log.rows[k - 1].true_error;
      CHECK(xi <= err * (1.0 + 1e-10) + 1e-14);
    }
  }
}

TEST_CASE("error identity against the zeta tail") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.primal_exact = prob.u_exact;
  const GkbResult res = run_exact(prob.system, opts);
  const auto& zeta = res.state.zeta;
  for (std::size_t k = 1; k < zeta.size(); ++k) {
    double tail = 0.0;
    for (std::size_t i = k; i < zeta.size(); ++i) tail += zeta[i] * zeta[i];
    const double err2 = std::pow(*res.log.rows[k - 1].true_error, 2);
    CHECK(oracles::rel_diff(err2, tail) <= 1e-8);
  }
}

TEST_CASE("error monotonicity with exact inner solves") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 13);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.primal_exact = prob.u_exact;
  const GkbResult res = run_exact(prob.system, opts);
  double prev = 1e300;
  for (const auto& row : res.log.rows) {
    CHECK(*row.true_error <= prev * (1.0 + 1e-12));
    prev = *row.true_error;
  }
}

TEST_CASE("basis orthonormality with exact inner solves") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.record_basis = true;
  const GkbResult res = run_exact(prob.system, opts);
  const auto& V = res.state.V;
  const auto& Q = res.state.Q;
  REQUIRE(V.size() == 8);
  for (std::size_t i = 0; i < V.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double mij = dot(V[i], spmv(prob.system.M, V[j]));
      const double nij = dot(Q[i], Q[j]) / prob.system.eta;
      if (i == j) {
        CHECK(std::abs(mij - 1.0) <= 1e-10);
        CHECK(std::abs(nij - 1.0) <= 1e-10);
      } else {
        CHECK(std::abs(mij) <= 1e-8);
        CHECK(std::abs(nij) <= 1e-8);
      }
    }
  }
}

TEST_CASE("dual residual basics and recurrence identity") {
  const SaddleSystem s = tiny_system();
  CHECK(dual_residual(s, s.r, {0.0, 0.0}) == doctest::Approx(norm2(s.r)));
  CHECK(dual_residual(s, s.r, {1.0, 0.0}) <= 1e-12);

  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e4, 3);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.record_basis = true;
  const ExactInnerSolver inner(prob.system.M);
  RelaxPolicy pol = constant_policy();
  const TransformResult tr = transform_rhs(prob.system, inner, 1e-12);
  GkbState st = gkb_init(prob.system, tr.b, inner, 1e-12, true);
  Vector u_hist = st.u;
  for (std::size_t k = 1; k < 8; ++k) {
    const Vector u_k = st.u;
    gkb_step(st, prob.system, inner, 1e-12);
    REQUIRE(!st.lucky_breakdown);
    // ||b - A^T u_k|| = |beta_{k+1} zeta_k| ||q_{k+1}||
    const double lhs = dual_residual(prob.system, tr.b, u_k);
    const double rhs =
        std::abs(st.beta.back() * st.zeta[k - 1]) * norm2(st.q);
    if (std::max(lhs, rhs) > 1e-12 * norm2(tr.b)) {
      CHECK(oracles::rel_diff(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("recover_w and true_error_M") {
  CHECK(recover_w({1, 1}, {2, 3}) == Vector{3, 4});
  CHECK(recover_w({1, 1}, {0, 0}) == Vector{1, 1});
  CHECK(true_error_M({1, 2}, {1, 2}, SparseMatrix::identity(2)) == 0.0);
  CHECK(true_error_M({1, 2}, {0, 0}, SparseMatrix::identity(2)) ==
        doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("gkb_solve on the trivial one-step system") {
  const SaddleSystem s = tiny_system();
  GkbOptions opts;
  opts.outer_tol = 1e-7;
  opts.delay = 3;
  const GkbResult res = run_exact(s, opts);
  CHECK(res.log.status == SolveStatus::BreakdownConverged);
  CHECK(oracles::rel_err(res.u, {1.0, 0.0}) <= 1e-12);
  CHECK(res.p[0] == doctest::Approx(-1.0));
}

TEST_CASE("gkb_solve cost accounting matches the log rows") {
  // the augmented system has a nonzero g, so the transform solve is real
  GeneratedProblem prob = gen_mixed_poisson_rt0(8, 2);
  prob.system = augment_for_test(prob.system);
  GkbOptions opts;
  opts.outer_tol = 1e-7;
  opts.tau = 1e-8;
  const CgInnerSolver inner(prob.system.M, 10000);
  RelaxPolicy pol = constant_policy(1e-8);
  const GkbResult res = gkb_solve(prob.system, opts, make_policy_fn(pol), inner);
  CHECK(res.log.transform_inner_iters > 0);
  std::size_t total = res.log.transform_inner_iters;
  for (const auto& row : res.log.rows) total += row.inner_iterations;
  CHECK(total == res.log.cum_inner);
  CHECK(res.log.status == SolveStatus::Converged);
}

TEST_CASE("gkb_solve reaches the target accuracy with exact inner solves") {
  const GeneratedProblem prob = gen_mixed_poisson_rt0(16, 1);
  GkbOptions opts;
  opts.outer_tol = 1e-7;
  opts.delay = 3;
  const GkbResult res = run_exact(prob.system, opts);
  CHECK(res.log.converged);
  auto [w_want, p_want] = oracles::solve_block(prob.system);
  const Vector w = recover_w(res.u, res.shift);
  const double err = true_error_M(w, w_want, prob.system.M);
  const double scale = weighted_norm(w_want, prob.system.M);
  CHECK(err <= 1e-7 * scale);

  // the recovered w satisfies the first block row M w + A p = g
  const Vector block_res = sub(
      add(spmv(prob.system.M, w), spmv(prob.system.A, res.p)), prob.system.g);
  CHECK(norm2(block_res) <= 1e-7 * (1.0 + norm2(prob.system.g)));
}

TEST_CASE("gkb_solve stagnates under a loose constant inner tolerance") {
  const GeneratedProblem prob = gen_mixed_poisson_rt0(16, 1);
  GkbOptions opts;
  opts.outer_tol = 1e-7;
  opts.delay = 3;
  opts.maxit = 120;
  opts.tau = 1e-3;
  const CgInnerSolver inner(prob.system.M, 10000);
  RelaxPolicy pol = constant_policy(1e-3);
  const GkbResult res = gkb_solve(prob.system, opts, make_policy_fn(pol), inner);
  auto [w_want, p_want] = oracles::solve_block(prob.system);
  const double err = true_error_M(recover_w(res.u, res.shift), w_want, prob.system.M);
  const double scale = weighted_norm(w_want, prob.system.M);
  CHECK(err > 1e-5 * scale);
}

TEST_CASE("tracked dual residual decreases to the solution") {
  const GeneratedProblem prob = gen_random_saddle(20, 8, 1e3, 5);
  GkbOptions opts;
  opts.outer_tol = 1e-30;
  opts.maxit = 8;
  opts.track_dual_residual = true;
  const GkbResult res = run_exact(prob.system, opts);
  REQUIRE(!res.log.rows.empty());
  for (const auto& row : res.log.rows) CHECK(row.dual_residual_norm.has_value());
  CHECK(*res.log.rows.back().dual_residual_norm <=
        1e-8 * *res.log.rows.front().dual_residual_norm);
  // the column shows up in the CSV data rows (7th field non-empty)
  const std::string csv = runlog_to_csv(res.log);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  std::getline(lines, line);  // transform row (k = 0, no residual)
  while (std::getline(lines, line)) {
    std::size_t pos = 0;
    for (int c = 0; c < 6; ++c) pos = line.find(',', pos) + 1;
    CHECK(line[pos] != ',');
  }
}

TEST_CASE("solver survives an inner iteration cap without crashing") {
  const GeneratedProblem prob = gen_mixed_poisson_rt0(8, 2);
  GkbOptions opts;
  opts.outer_tol = 1e-10;
  opts.maxit = 40;
  opts.tau = 1e-10;
  opts.inner_maxit = 3;  // far too few: every inner solve stays inexact
  const CgInnerSolver inner(prob.system.M, opts.inner_maxit);
  RelaxPolicy pol = constant_policy(1e-10);
  const GkbResult res = gkb_solve(prob.system, opts, make_policy_fn(pol), inner);
  CHECK(all_finite(res.u));
  CHECK(all_finite(res.p));
}

TEST_CASE("runlog csv shape") {
  const SaddleSystem s = tiny_system();
  GkbOptions opts;
  opts.outer_tol = 1e-7;
  const GkbResult res = run_exact(s, opts);
  const std::string csv = runlog_to_csv(res.log);
  CHECK(csv.rfind("k,inner_iters,cum_inner,tol_used,zeta_abs,lower_bound,"
                  "dual_residual,true_error\n",
                  0) == 0);
  CHECK(csv.find("\n0,0,0,") != std::string::npos);  // transform row
}
