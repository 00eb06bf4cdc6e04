#ifndef GKB_RELAXATION_HPP
#define GKB_RELAXATION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gkb/dense.hpp"
#include "gkb/saddle_system.hpp"

namespace gkb {

/// Inner-tolerance selection rules. Constant is the comparison baseline;
/// Adaptive, Predicted, Hybrid and Optimal divide a base tolerance tau by
/// (extrapolated) solution coefficients; Bouras and Simoncini divide the
/// outer target by the current dual residual norm.
enum class PolicyKind {
  Constant,
  Adaptive,
  Predicted,
  Hybrid,
  Optimal,
  Bouras,
  Simoncini,
};

std::string policy_name(PolicyKind kind);
std::optional<PolicyKind> policy_from_name(const std::string& name);

struct RelaxPolicy {
  PolicyKind kind = PolicyKind::Constant;
  double tau = 1e-8;      // base inner tolerance
  double cap = 0.1;       // upper bound for every emitted tolerance
  double c = 0.05;        // Optimal's problem-dependent parameter
  double epsilon = 1e-7;  // outer target, used by Bouras/Simoncini
  double l = 1.0;         // Simoncini's constant (1 recovers Bouras)
  double prev_tol = 0.0;  // Hybrid memory; initialized on first use

  void validate() const;
};

/// Quantities available to a policy when choosing the tolerance for the
/// inner solve of outer iteration k. zeta_hist holds |zeta_1|..|zeta_{k-1}|.
struct PolicyInputs {
  std::size_t k = 1;
  std::vector<double> zeta_hist;
  std::optional<double> residual_norm;  // ||b - A^T u_{k-1}||_2, b for k = 1
  double prev_tol = 0.0;                // previously emitted tolerance, 0 if none
};

/// Geometric extrapolation of the |zeta| sequence: with
/// rho = zeta[last]/zeta[last-1], one step ahead is zeta[last]*rho and two
/// steps ahead is zeta[last]*rho^2. Empty result when fewer than two
/// history entries exist.
std::optional<double> predict_zeta(const std::vector<double>& zeta_hist, int steps);

/// Emits the inner tolerance for the next outer iteration. Every result is
/// clamped to [1e-16, policy.cap]. Hybrid updates policy.prev_tol to the
/// emitted value.
double next_tolerance(RelaxPolicy& policy, const PolicyInputs& inputs);

struct SimonciniConstant {
  double l = 0.0;
  double sigma_min_schur = 0.0;
  double sigma_max_at_minv = 0.0;
};

/// l = sigma_min(S) / (sigma_max(A^T M^{-1}) * m_star) with
/// S = A^T M^{-1} A, computed by dense factorization of M. Throws
/// CapacityError when M exceeds dense_cap.
SimonciniConstant simoncini_constant(const SaddleSystem& system, std::size_t m_star,
                                     std::size_t dense_cap = 20000);

}  // namespace gkb

#endif
