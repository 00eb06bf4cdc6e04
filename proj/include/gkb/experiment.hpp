#ifndef GKB_EXPERIMENT_HPP
#define GKB_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gkb/gkb.hpp"
#include "gkb/problems.hpp"
#include "gkb/relaxation.hpp"

namespace gkb {

struct PolicySpec {
  PolicyKind kind = PolicyKind::Constant;
  std::optional<double> c;
  std::optional<double> epsilon;  // defaults to outer_tol
  std::optional<double> l;        // Simoncini constant; computed when absent
  std::optional<std::size_t> m_star;

  std::string label() const;
};

struct ExperimentConfig {
  // problem selection: a generator name or a load directory
  std::string problem = "mixed-poisson";  // mixed-poisson | mac-channel | random-saddle
  std::string load_path;                  // non-empty overrides the generator
  std::size_t n = 16;                     // mixed-poisson n, mac ny, random-saddle n
  std::size_t m = 0;                      // random-saddle m (0 picks 3n)
  std::optional<std::size_t> nx;          // mac: derived from ny and length if absent
  double length = 20.0;                   // mac channel
  double cond = 1e4;                      // random-saddle condition target
  std::uint64_t seed = 1;

  // transforms
  std::optional<double> al_eta;  // augmented Lagrangian parameter
  std::size_t k_defl = 0;

  // solver
  GkbOptions options;
  std::string inner = "cg";  // cg | exact
  std::size_t dense_cap = 20000;

  std::vector<PolicySpec> policies;

  std::string log_path;  // solve: CSV path; compare: directory of per-policy CSVs
  std::string out_path;  // compare: table CSV; generate: target directory
};

ExperimentConfig config_from_json_file(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

struct SavingsRow {
  std::string policy;
  std::size_t cum_inner = 0;
  bool converged = false;
  double final_lower_bound = 1.0;
};

struct SavingsTable {
  std::vector<SavingsRow> rows;  // rows[0] is the Constant baseline

  /// 100 * (1 - cum_inner / baseline); empty for non-converged policies.
  std::optional<double> savings_percent(std::size_t row) const;
  std::string to_csv() const;
  std::string to_text() const;
};

double savings_percent(std::size_t constant_total, std::size_t policy_total);

/// Assembles the configured problem (generator or load path) and applies
/// the configured transforms. Returns the ready-to-solve system.
GeneratedProblem build_problem(const ExperimentConfig& cfg);

/// Exit codes: 0 converged, 2 stopped at maxit, 1 error.
int cmd_solve(const ExperimentConfig& cfg, std::ostream& out);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& out);
int cmd_generate(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace gkb

#endif
