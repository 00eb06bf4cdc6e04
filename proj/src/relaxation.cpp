#include "gkb/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include "gkb/errors.hpp"

namespace gkb {

namespace {
constexpr double kTolFloor = 1e-16;
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Constant: return "constant";
    case PolicyKind::Adaptive: return "adaptive";
    case PolicyKind::Predicted: return "predicted";
    case PolicyKind::Hybrid: return "hybrid";
    case PolicyKind::Optimal: return "optimal";
    case PolicyKind::Bouras: return "bouras";
    case PolicyKind::Simoncini: return "simoncini";
  }
  return "unknown";
}

std::optional<PolicyKind> policy_from_name(const std::string& name) {
  if (name == "constant") return PolicyKind::Constant;
  if (name == "adaptive") return PolicyKind::Adaptive;
  if (name == "predicted") return PolicyKind::Predicted;
  if (name == "hybrid") return PolicyKind::Hybrid;
  if (name == "optimal") return PolicyKind::Optimal;
  if (name == "bouras") return PolicyKind::Bouras;
  if (name == "simoncini") return PolicyKind::Simoncini;
  return std::nullopt;
}

void RelaxPolicy::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("policy: tau must lie in (0,1)");
  if (!(cap > 0.0 && cap <= 1.0)) throw ConfigError("policy: cap must lie in (0,1]");
  if (tau > cap) throw ConfigError("policy: tau must not exceed cap");
  if (!(c > 0.0)) throw ConfigError("policy: c must be positive");
  if (kind == PolicyKind::Bouras || kind == PolicyKind::Simoncini) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw ConfigError("policy: epsilon must lie in (0,1)");
    }
    if (!(l > 0.0)) throw ConfigError("policy: l must be positive");
  }
}

std::optional<double> predict_zeta(const std::vector<double>& zeta_hist, int steps) {
  if (zeta_hist.size() < 2) return std::nullopt;
  const double last = zeta_hist[zeta_hist.size() - 1];
  const double prev = zeta_hist[zeta_hist.size() - 2];
  const double rho = last / prev;
  return steps == 1 ? last * rho : last * rho * rho;
}

namespace {
double clamp_tol(double t, double cap) {
  return std::min(cap, std::max(kTolFloor, t));
}
}  // namespace

double next_tolerance(RelaxPolicy& policy, const PolicyInputs& inputs) {
  const double cap = policy.cap;
  const double tau = policy.tau;

  if (policy.kind == PolicyKind::Bouras || policy.kind == PolicyKind::Simoncini) {
    if (!inputs.residual_norm.has_value()) {
      throw ConfigError("policy: residual norm required for a residual-based rule");
    }
    const double rn = *inputs.residual_norm;
    if (rn == 0.0) return cap;  // solution already reached
    const double scale = policy.kind == PolicyKind::Simoncini ? policy.l : 1.0;
    return clamp_tol(scale * policy.epsilon / rn, cap);
  }

  if (policy.kind == PolicyKind::Constant) return clamp_tol(tau, cap);

  // zeta-based rules warm up at tau until two history entries exist
  if (inputs.zeta_hist.size() < 2) {
    const double t = clamp_tol(tau, cap);
    if (policy.kind == PolicyKind::Hybrid) policy.prev_tol = t;
    return t;
  }
  const double zeta_last = inputs.zeta_hist.back();
  switch (policy.kind) {
    case PolicyKind::Adaptive:
      return clamp_tol(tau / zeta_last, cap);
    case PolicyKind::Predicted:
      return clamp_tol(tau / *predict_zeta(inputs.zeta_hist, 2), cap);
    case PolicyKind::Optimal:
      return clamp_tol(tau / (policy.c * zeta_last), cap);
    case PolicyKind::Hybrid: {
      const double prev = policy.prev_tol > 0.0 ? policy.prev_tol : tau;
      const double cand = std::max(
          {prev, tau / zeta_last, tau / *predict_zeta(inputs.zeta_hist, 1),
           tau / *predict_zeta(inputs.zeta_hist, 2)});
      const double t = clamp_tol(cand, cap);
      policy.prev_tol = t;
      return t;
    }
    default:
      break;
  }
  throw ConfigError("policy: unsupported kind");
}

SimonciniConstant simoncini_constant(const SaddleSystem& system, std::size_t m_star,
                                     std::size_t dense_cap) {
  if (m_star < 1) throw ConfigError("simoncini_constant: m_star must be >= 1");
  const std::size_t m = system.primal_dim();
  const std::size_t n = system.dual_dim();
  if (m > dense_cap) {
    throw CapacityError(
        "simoncini_constant: primal dimension " + std::to_string(m) +
        " exceeds dense cap " + std::to_string(dense_cap) +
        "; supply the constant l directly");
  }
  const CholeskyFactor chol(DenseMatrix::from_sparse(system.M));
  const DenseMatrix a_dense = DenseMatrix::from_sparse(system.A);
  // Y = M^{-1} A, column by column
  DenseMatrix y(m, n);
  {
    Vector col(m);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) col[i] = a_dense.at(i, j);
      const Vector sol = chol.solve(col);
      for (std::size_t i = 0; i < m; ++i) y.at(i, j) = sol[i];
    }
  }
  // S = A^T Y (n x n), symmetrized
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < system.A.n_rows; ++i) {
    for (std::size_t k = system.A.row_offsets[i]; k < system.A.row_offsets[i + 1]; ++k) {
      const std::size_t jrow = system.A.col_indices[k];
      const double a = system.A.values[k];
      for (std::size_t j = 0; j < n; ++j) s.at(jrow, j) += a * y.at(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (s.at(i, j) + s.at(j, i));
      s.at(i, j) = v;
      s.at(j, i) = v;
    }
  }
  // sigma_max(A^T M^{-1}) = sqrt(lambda_max(Y^T Y)) since M is symmetric
  DenseMatrix yty(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) acc += y.at(k, i) * y.at(k, j);
      yty.at(i, j) = acc;
      yty.at(j, i) = acc;
    }
  }
  SimonciniConstant out;
  out.sigma_min_schur = eigen_min(s);
  out.sigma_max_at_minv = std::sqrt(std::max(0.0, eigen_max(yty)));
  if (out.sigma_max_at_minv <= 0.0) {
    throw RankError("simoncini_constant: A^T M^{-1} has zero largest singular value");
  }
  out.l = out.sigma_min_schur /
          (out.sigma_max_at_minv * static_cast<double>(m_star));
  return out;
}

}  // namespace gkb
