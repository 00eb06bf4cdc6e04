#include "gkb/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "gkb/errors.hpp"
#include "gkb/matrix_market.hpp"
#include "gkb/transforms.hpp"

namespace gkb {

namespace {
using nlohmann::json;

PolicySpec policy_spec_from_json(const json& j) {
  PolicySpec spec;
  const std::string name = j.at("name").get<std::string>();
  const auto kind = policy_from_name(name);
  if (!kind) {
    throw ConfigError(
        "unknown policy '" + name +
        "'; valid: constant, adaptive, predicted, hybrid, optimal, bouras, "
        "simoncini");
  }
  spec.kind = *kind;
  if (j.contains("c")) spec.c = j.at("c").get<double>();
  if (j.contains("epsilon")) spec.epsilon = j.at("epsilon").get<double>();
  if (j.contains("l")) spec.l = j.at("l").get<double>();
  if (j.contains("m_star")) spec.m_star = j.at("m_star").get<std::size_t>();
  return spec;
}
}  // namespace

std::string PolicySpec::label() const {
  std::string s = policy_name(kind);
  if (kind == PolicyKind::Simoncini && m_star) {
    s += "(m*=" + std::to_string(*m_star) + ")";
  }
  return s;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    if (p.contains("load")) {
      cfg.load_path = p.at("load").get<std::string>();
    } else {
      cfg.problem = p.at("name").get<std::string>();
    }
    if (p.contains("n")) cfg.n = p.at("n").get<std::size_t>();
    if (p.contains("ny")) cfg.n = p.at("ny").get<std::size_t>();
    if (p.contains("nx")) cfg.nx = p.at("nx").get<std::size_t>();
    if (p.contains("m")) cfg.m = p.at("m").get<std::size_t>();
    if (p.contains("length")) cfg.length = p.at("length").get<double>();
    if (p.contains("cond")) cfg.cond = p.at("cond").get<double>();
    if (p.contains("seed")) cfg.seed = p.at("seed").get<std::uint64_t>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("transform")) {
    const json& t = j.at("transform");
    if (t.contains("eta")) cfg.al_eta = t.at("eta").get<double>();
    if (t.contains("k_defl")) cfg.k_defl = t.at("k_defl").get<std::size_t>();
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (s.contains("outer_tol")) cfg.options.outer_tol = s.at("outer_tol").get<double>();
    if (s.contains("tau")) cfg.options.tau = s.at("tau").get<double>();
    if (s.contains("delay")) cfg.options.delay = s.at("delay").get<std::size_t>();
    if (s.contains("maxit")) cfg.options.maxit = s.at("maxit").get<std::size_t>();
    if (s.contains("inner_maxit")) {
      cfg.options.inner_maxit = s.at("inner_maxit").get<std::size_t>();
    }
    if (s.contains("cap")) cfg.options.tol_cap = s.at("cap").get<double>();
    if (s.contains("inner")) cfg.inner = s.at("inner").get<std::string>();
    if (s.contains("dense_cap")) cfg.dense_cap = s.at("dense_cap").get<std::size_t>();
  }
  if (j.contains("policies")) {
    for (const json& p : j.at("policies")) {
      cfg.policies.push_back(policy_spec_from_json(p));
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("log")) cfg.log_path = o.at("log").get<std::string>();
    if (o.contains("table")) cfg.out_path = o.at("table").get<std::string>();
  }
  return cfg;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

double savings_percent(std::size_t constant_total, std::size_t policy_total) {
  if (constant_total == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(policy_total) /
                            static_cast<double>(constant_total));
}

std::optional<double> SavingsTable::savings_percent(std::size_t row) const {
  if (row >= rows.size() || rows.empty()) return std::nullopt;
  if (!rows[row].converged) return std::nullopt;
  if (row == 0) return 0.0;  // baseline by definition
  return gkb::savings_percent(rows[0].cum_inner, rows[row].cum_inner);
}

std::string SavingsTable::to_csv() const {
  std::string out = "policy,cum_inner,savings_percent,converged,final_lower_bound\n";
  char buf[256];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SavingsRow& r = rows[i];
    const auto sav = savings_percent(i);
    std::string sav_str = "-";
    if (sav) {
      std::snprintf(buf, sizeof(buf), "%.2f", *sav);
      sav_str = buf;
    }
    std::snprintf(buf, sizeof(buf), "%s,%zu,%s,%s,%.17g\n", r.policy.c_str(),
                  r.cum_inner, sav_str.c_str(), r.converged ? "true" : "false",
                  r.final_lower_bound);
    out += buf;
  }
  return out;
}

std::string SavingsTable::to_text() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-22s %12s %10s %10s\n", "policy", "cum_inner",
                "savings%", "converged");
  out += buf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SavingsRow& r = rows[i];
    const auto sav = savings_percent(i);
    std::string sav_str = "-";
    if (sav) {
      std::snprintf(buf, sizeof(buf), "%.2f", *sav);
      sav_str = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-22s %12zu %10s %10s\n", r.policy.c_str(),
                  r.cum_inner, sav_str.c_str(), r.converged ? "yes" : "no");
    out += buf;
  }
  return out;
}

GeneratedProblem build_problem(const ExperimentConfig& cfg) {
  GeneratedProblem prob;
  if (!cfg.load_path.empty()) {
    prob.system = load_system(cfg.load_path);
    prob.description = "loaded from " + cfg.load_path;
  } else if (cfg.problem == "mixed-poisson") {
    prob = gen_mixed_poisson_rt0(cfg.n, cfg.seed);
  } else if (cfg.problem == "mac-channel") {
    const std::size_t ny = cfg.n;
    std::size_t nx = cfg.nx.value_or(0);
    if (nx == 0) {
      // near-square cells: hx close to hy = 2/ny
      nx = static_cast<std::size_t>(
          std::ceil(static_cast<double>(ny) * (cfg.length + 1.0) / 2.0));
    }
    prob = gen_mac_stokes_channel(nx, ny, cfg.length);
  } else if (cfg.problem == "random-saddle") {
    const std::size_t m = cfg.m > 0 ? cfg.m : 3 * cfg.n;
    prob = gen_random_saddle(m, cfg.n, cfg.cond, cfg.seed);
  } else {
    throw ConfigError("unknown problem '" + cfg.problem +
                      "'; valid: mixed-poisson, mac-channel, random-saddle");
  }

  if (cfg.al_eta) {
    prob.system = augment(prob.system, *cfg.al_eta);
    prob.description += " +AL(eta=" + std::to_string(*cfg.al_eta) + ")";
    // the augmented system has the same solution, so any exact vectors stay
  }
  return prob;
}

namespace {

std::unique_ptr<InnerSolver> make_inner(const ExperimentConfig& cfg,
                                        const SparseMatrix& M) {
  if (cfg.inner == "cg") {
    return std::make_unique<CgInnerSolver>(M, cfg.options.inner_maxit);
  }
  if (cfg.inner == "exact") {
    return std::make_unique<ExactInnerSolver>(M, cfg.dense_cap);
  }
  throw ConfigError("unknown inner solver '" + cfg.inner + "'; valid: cg, exact");
}

RelaxPolicy make_relax_policy(const ExperimentConfig& cfg, const PolicySpec& spec,
                              const SaddleSystem& system,
                              std::optional<double>& cached_l) {
  RelaxPolicy p;
  p.kind = spec.kind;
  p.tau = cfg.options.tau;
  p.cap = cfg.options.tol_cap;
  p.epsilon = spec.epsilon.value_or(cfg.options.outer_tol);
  if (spec.c) p.c = *spec.c;
  if (spec.kind == PolicyKind::Simoncini) {
    if (spec.l) {
      p.l = *spec.l;
    } else {
      if (!cached_l) {
        const std::size_t m_star = spec.m_star.value_or(100);
        cached_l = simoncini_constant(system, m_star, cfg.dense_cap).l;
      }
      p.l = *cached_l;
    }
  }
  p.validate();
  return p;
}

struct PolicyRun {
  GkbResult result;
  bool failed = false;
  std::string error;
};

PolicyRun run_one_policy(const ExperimentConfig& cfg, const GeneratedProblem& prob,
                         const PolicySpec& spec, const InnerSolver& inner,
                         std::optional<double>& cached_l) {
  PolicyRun out;
  try {
    RelaxPolicy policy = make_relax_policy(cfg, spec, prob.system, cached_l);
    GkbOptions opts = cfg.options;
    opts.policy_uses_residual =
        spec.kind == PolicyKind::Bouras || spec.kind == PolicyKind::Simoncini;
    // a deflated run converges to the deflated solution, so the per-row
    // error against the full one would be meaningless
    if (prob.u_exact && cfg.k_defl == 0) opts.primal_exact = prob.u_exact;
    const PolicyFn fn = make_policy_fn(policy);
    if (cfg.k_defl > 0) {
      DeflatedSolveResult d =
          deflated_solve(prob.system, cfg.k_defl, opts, fn, inner, cfg.dense_cap);
      d.run.u = d.u;
      d.run.p = d.p;
      out.result = std::move(d.run);
    } else {
      out.result = gkb_solve(prob.system, opts, fn, inner);
    }
  } catch (const Error& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
}

}  // namespace

int cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
  try {
    const GeneratedProblem prob = build_problem(cfg);
    const PolicySpec spec =
        cfg.policies.empty() ? PolicySpec{} : cfg.policies.front();
    const auto inner = make_inner(cfg, prob.system.M);
    std::optional<double> cached_l;
    PolicyRun run = run_one_policy(cfg, prob, spec, *inner, cached_l);
    if (run.failed) {
      out << "error: " << run.error << "\n";
      return 1;
    }
    if (!cfg.log_path.empty()) {
      write_text_file(cfg.log_path, runlog_to_csv(run.result.log));
    }
    const RunLog& log = run.result.log;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "policy=%s status=%s outer_iters=%zu cum_inner=%zu "
                  "final_lower_bound=%.6g wall_s=%.3f\n",
                  spec.label().c_str(), status_name(log.status).c_str(),
                  log.rows.size(), log.cum_inner, log.final_lower_bound,
                  log.wall_seconds);
    out << buf;
    return log.status == SolveStatus::MaxIterations ? 2 : 0;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& out) {
  try {
    std::vector<PolicySpec> specs = cfg.policies;
    const bool has_constant =
        !specs.empty() && specs.front().kind == PolicyKind::Constant;
    if (!has_constant) {
      // the savings table is relative to the Constant baseline
      specs.insert(specs.begin(), PolicySpec{});
    }
    if (specs.size() < 2) {
      throw ConfigError("compare: need at least two policies");
    }
    const GeneratedProblem prob = build_problem(cfg);
    const auto inner = make_inner(cfg, prob.system.M);
    std::optional<double> cached_l;

    SavingsTable table;
    for (const PolicySpec& spec : specs) {
      PolicyRun run = run_one_policy(cfg, prob, spec, *inner, cached_l);
      SavingsRow row;
      row.policy = spec.label();
      if (run.failed) {
        out << "# " << spec.label() << " failed: " << run.error << "\n";
        row.converged = false;
        row.cum_inner = 0;
        row.final_lower_bound = 1.0;
      } else {
        const RunLog& log = run.result.log;
        row.cum_inner = log.cum_inner;
        row.converged = log.status != SolveStatus::MaxIterations;
        row.final_lower_bound = log.final_lower_bound;
        if (!cfg.log_path.empty()) {
          std::filesystem::create_directories(cfg.log_path);
          const auto path =
              std::filesystem::path(cfg.log_path) / (spec.label() + ".csv");
          write_text_file(path.string(), runlog_to_csv(log));
        }
      }
      table.rows.push_back(row);
    }
    out << table.to_text();
    if (!cfg.out_path.empty()) {
      write_text_file(cfg.out_path, table.to_csv());
    }
    return 0;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_generate(const ExperimentConfig& cfg, std::ostream& out) {
  try {
    if (cfg.out_path.empty()) {
      throw ConfigError("generate: an output directory is required");
    }
    const GeneratedProblem prob = build_problem(cfg);
    save_system(cfg.out_path, prob.system);
    namespace fs = std::filesystem;
    if (prob.u_exact) {
      mm_write((fs::path(cfg.out_path) / "u_exact.mtx").string(), *prob.u_exact);
    }
    if (prob.p_exact) {
      mm_write((fs::path(cfg.out_path) / "p_exact.mtx").string(), *prob.p_exact);
    }
    out << "wrote " << prob.description << " to " << cfg.out_path << "\n";
    return 0;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gkb
