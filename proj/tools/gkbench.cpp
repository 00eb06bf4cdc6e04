// Benchmark driver: solve saddle-point systems with the generalized
// Golub-Kahan bidiagonalization under different inner-tolerance policies,
// compare their inner-iteration cost, and materialize test problems.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gkb/errors.hpp"
#include "gkb/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string problem;
  std::string load;
  std::optional<std::size_t> n;
  std::optional<std::size_t> nx;
  std::optional<std::size_t> m;
  std::optional<double> length;
  std::optional<double> cond;
  std::optional<double> eta;
  std::optional<std::size_t> k_defl;
  std::vector<std::string> policies;
  std::optional<double> tau;
  std::optional<double> c;
  std::optional<double> epsilon;
  std::optional<std::size_t> m_star;
  std::optional<double> outer_tol;
  std::optional<std::size_t> delay;
  std::optional<std::size_t> maxit;
  std::optional<std::size_t> inner_maxit;
  std::optional<std::uint64_t> seed;
  std::string inner;
  std::string log;
  std::string out;
};

void add_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file (flags override it)");
  cmd->add_option("--problem", f.problem,
                  "generator: mixed-poisson | mac-channel | random-saddle");
  cmd->add_option("--load", f.load, "directory with M.mtx A.mtx g.mtx r.mtx meta.txt");
  cmd->add_option("--n", f.n, "resolution (mixed-poisson n, mac ny, random n)");
  cmd->add_option("--nx", f.nx, "mac channel cells along the channel");
  cmd->add_option("--m", f.m, "random-saddle primal dimension");
  cmd->add_option("--length", f.length, "mac channel length L");
  cmd->add_option("--cond", f.cond, "random-saddle condition target");
  cmd->add_option("--eta", f.eta, "augmented Lagrangian parameter");
  cmd->add_option("--k-defl", f.k_defl, "number of Schur eigendirections to deflate");
  cmd->add_option("--policy", f.policies,
                  "inner-tolerance policy (repeatable for compare)");
  cmd->add_option("--tau", f.tau, "base inner tolerance");
  cmd->add_option("--c", f.c, "optimal policy parameter");
  cmd->add_option("--epsilon", f.epsilon, "target for residual-based policies");
  cmd->add_option("--m-star", f.m_star, "simoncini outer-iteration budget");
  cmd->add_option("--outer-tol", f.outer_tol, "outer stopping tolerance");
  cmd->add_option("--delay", f.delay, "lower-bound delay d (default 3)");
  cmd->add_option("--maxit", f.maxit, "outer iteration cap (0: 10x dual dim)");
  cmd->add_option("--inner-maxit", f.inner_maxit, "inner CG iteration cap");
  cmd->add_option("--seed", f.seed, "generator seed");
  cmd->add_option("--inner", f.inner, "inner solver: cg | exact");
  cmd->add_option("--log", f.log, "run log CSV (solve) or directory (compare)");
  cmd->add_option("--out", f.out, "table CSV (compare) or directory (generate)");
}

gkb::ExperimentConfig merge(const CommonFlags& f) {
  gkb::ExperimentConfig cfg;
  if (!f.config.empty()) cfg = gkb::config_from_json_file(f.config);
  if (!f.problem.empty()) cfg.problem = f.problem;
  if (!f.load.empty()) cfg.load_path = f.load;
  if (f.n) cfg.n = *f.n;
  if (f.nx) cfg.nx = f.nx;
  if (f.m) cfg.m = *f.m;
  if (f.length) cfg.length = *f.length;
  if (f.cond) cfg.cond = *f.cond;
  if (f.eta) cfg.al_eta = f.eta;
  if (f.k_defl) cfg.k_defl = *f.k_defl;
  if (f.tau) cfg.options.tau = *f.tau;
  if (f.outer_tol) cfg.options.outer_tol = *f.outer_tol;
  if (f.delay) cfg.options.delay = *f.delay;
  if (f.maxit) cfg.options.maxit = *f.maxit;
  if (f.inner_maxit) cfg.options.inner_maxit = *f.inner_maxit;
  if (f.seed) cfg.seed = *f.seed;
  if (!f.inner.empty()) cfg.inner = f.inner;
  if (!f.log.empty()) cfg.log_path = f.log;
  if (!f.out.empty()) cfg.out_path = f.out;
  if (!f.policies.empty()) {
    cfg.policies.clear();
    for (const std::string& name : f.policies) {
      const auto kind = gkb::policy_from_name(name);
      if (!kind) throw gkb::ConfigError("unknown policy '" + name + "'");
      gkb::PolicySpec spec;
      spec.kind = *kind;
      cfg.policies.push_back(spec);
    }
  }
  // per-policy scalar flags apply to every selected policy
  for (gkb::PolicySpec& spec : cfg.policies) {
    if (f.c) spec.c = f.c;
    if (f.epsilon) spec.epsilon = f.epsilon;
    if (f.m_star) spec.m_star = f.m_star;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saddle-point GKB solver benchmark"};
  app.require_subcommand(1);

  CommonFlags solve_flags, compare_flags, generate_flags;
  CLI::App* solve = app.add_subcommand("solve", "run one policy, write a run log");
  add_flags(solve, solve_flags);
  CLI::App* compare =
      app.add_subcommand("compare", "run several policies, emit a savings table");
  add_flags(compare, compare_flags);
  CLI::App* generate =
      app.add_subcommand("generate", "write a generated problem as Matrix Market");
  add_flags(generate, generate_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return gkb::cmd_solve(merge(solve_flags), std::cout);
    if (compare->parsed()) return gkb::cmd_compare(merge(compare_flags), std::cout);
    if (generate->parsed()) return gkb::cmd_generate(merge(generate_flags), std::cout);
  } catch (const gkb::Error& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
