#include "geolab/cli/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "geolab/catalog/catalog.hpp"
#include "geolab/integrator/integrator.hpp"
#include "geolab/poisson/poisson.hpp"

namespace geolab::cli {

namespace {

std::string join_names(const GeodesicModel& m, const std::vector<std::size_t>& idx) {
  std::string s;
  for (std::size_t i : idx) s += (s.empty() ? "" : ",") + m.integrals[i].name;
  return s;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

std::vector<CotangentState> initial_states(const GeodesicModel& model, const RunConfig& cfg) {
  if (!cfg.explicit_states.empty()) {
    for (std::size_t i = 0; i < cfg.explicit_states.size(); ++i) {
      const auto& s = cfg.explicit_states[i];
      const std::string f = "states.explicit[" + std::to_string(i) + "]";
      if (s.dim() != model.dim)
        throw ConfigError(f, "state has dimension " + std::to_string(s.dim()) + ", model needs " +
                                 std::to_string(model.dim));
      model.check_domain(s.x);
      if (model.constraint_residual(s) > 1e-8 || model.tangency_residual(s) > 1e-8)
        throw ConfigError(f, "state is not on the constraint surface (tolerance 1e-8)");
    }
    return cfg.explicit_states;
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<CotangentState> out;
  for (std::size_t i = 0; i < cfg.state_count; ++i) out.push_back(model.sample(rng));
  return out;
}

}  // namespace

nlohmann::json Verdict::to_json() const {
  return {{"check", check}, {"subject", subject}, {"measured", measured}, {"threshold", threshold}, {"pass", pass}};
}

bool ReportBundle::all_pass() const { return failures() == 0; }

std::size_t ReportBundle::failures() const {
  std::size_t n = 0;
  for (const auto& v : verdicts) n += !v.pass;
  return n;
}

nlohmann::json ReportBundle::to_json() const {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : verdicts) vs.push_back(v.to_json());
  return {{"model", model_key},
          {"environment", {{"version", kVersion}, {"seed", seed}}},
          {"verdicts", vs},
          {"summary", {{"checks", verdicts.size()}, {"failures", failures()}, {"pass", all_pass()}}},
          {"details", details},
          {"artifacts", artifacts},
          {"config", config}};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

ReportBundle run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!has_model(cfg.model_key)) throw ConfigError("model.key", "unknown model '" + cfg.model_key + "'");
  GeodesicModel model = build_model(cfg.model_key, cfg.params);
  for (const auto& d : cfg.declared) {
    if (d.coordinate >= 2 * model.dim)
      throw ConfigError("model.declare." + d.name, "coordinate index out of range");
    model.integrals.push_back({d.name, SmoothFunction::coordinate(2 * model.dim, d.coordinate), 1,
                               Smoothness::analytic});
  }

  ReportBundle rb;
  rb.model_key = model.key;
  rb.seed = cfg.seed;
  rb.config = cfg.to_json();
  rb.details = nlohmann::json::object();
  const auto& checks = cfg.checks;

  if (checks.count("commutation")) {
    const double tol = checks.at("commutation");
    const FunctionFamily fam = model_family(model);
    const auto states = sample_states(fam.space, cfg.completeness_samples, cfg.seed);
    const Eigen::MatrixXd res = commutation_residual(fam, states);
    rb.details["commutation"] = {{"residual_matrix", matrix_json(res)}, {"states", states.size()}};
    for (const auto& set : model.commuting_sets) {
      double worst = 0.0;
      for (std::size_t i : set)
        for (std::size_t j : set) worst = std::max(worst, res(i, j));
      rb.verdicts.push_back({"commutation", join_names(model, set), worst, tol, worst <= tol});
    }
  }

  if (checks.count("completeness")) {
    const double rel = checks.at("completeness");
    const FunctionFamily fam = model_family(model);
    const auto states = sample_states(fam.space, cfg.completeness_samples, cfg.seed);
    const CompletenessReport rep = ddim_dind(fam, states, rel, cfg.seed);
    rb.details["completeness"] = rep.to_json();
    const double gap =
        std::abs(static_cast<double>(rep.ddim + rep.dind) - static_cast<double>(rep.phase_dim + rep.corank));
    rb.verdicts.push_back({"completeness", "ddim+dind vs dim", gap, 0.0, rep.complete});
  }

  const bool needs_flow = checks.count("conservation") || checks.count("energy") || checks.count("constraint");
  if (cfg.integration && (needs_flow || cfg.integration->write_trajectories)) {
    const auto states = initial_states(model, cfg);
    StepConfig sc;
    sc.dt = cfg.integration->dt;
    std::vector<double> drift(model.integrals.size(), 0.0);
    double energy = 0.0, constraint = 0.0;
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t i = 0; i < states.size(); ++i) {
      const TrajectoryRecord rec = integrate(model, states[i], sc, cfg.integration->t_end, cfg.integration->sample_every);
      const auto d = conservation_drift(model, rec);
      for (std::size_t k = 0; k < d.size(); ++k) drift[k] = std::max(drift[k], d[k]);
      energy = std::max(energy, rec.energy_drift);
      constraint = std::max({constraint, rec.max_constraint_residual, rec.max_tangency_residual});
      per.push_back(rec.summary());
      if (cfg.integration->write_trajectories && !out_dir.empty()) {
        std::ostringstream csv;
        rec.write_csv(csv);
        const std::string name = "trajectory_" + std::to_string(i) + ".csv";
        write_atomic(out_dir / name, csv.str());
        rb.artifacts.push_back(name);
      }
    }
    rb.details["trajectories"] = per;
    if (checks.count("conservation"))
      for (std::size_t k = 0; k < model.integrals.size(); ++k)
        rb.verdicts.push_back({"conservation", model.integrals[k].name, drift[k], checks.at("conservation"),
                               drift[k] <= checks.at("conservation")});
    if (checks.count("energy"))
      rb.verdicts.push_back({"energy", "H", energy, checks.at("energy"), energy <= checks.at("energy")});
    if (checks.count("constraint") && model.kind == ModelKind::embedded)
      rb.verdicts.push_back(
          {"constraint", "|c(q)|, <n,p>", constraint, checks.at("constraint"), constraint <= checks.at("constraint")});
  }

  if (!out_dir.empty()) {
    rb.artifacts.push_back("report.json");
    write_atomic(out_dir / "report.json", rb.to_json().dump(2) + "\n");
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    write_atomic(out_dir / "run_meta.json",
                 nlohmann::json{{"timestamp", ts.str()}, {"version", kVersion}}.dump(2) + "\n");
  }
  return rb;
}

RunConfig verify_config(const std::string& key, std::uint64_t seed, const CheckSet& tolerance_overrides) {
  if (!has_model(key)) throw ConfigError("model.key", "unknown model '" + key + "'");
  RunConfig cfg;
  cfg.seed = seed;
  cfg.model_key = key;
  cfg.state_count = 2;
  IntegrationBlock b;
  b.dt = 1e-3;
  b.t_end = 10.0;
  b.sample_every = 10;
  b.write_trajectories = false;
  cfg.integration = b;
  cfg.checks = default_checks();
  for (const auto& [name, tol] : tolerance_overrides) {
    if (!cfg.checks.count(name)) throw ConfigError("--tol " + name, "unknown check");
    if (!(tol > 0.0)) throw ConfigError("--tol " + name, "tolerance must be positive");
    cfg.checks[name] = tol;
  }
  return cfg;
}

nlohmann::json catalog_json() {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : list_catalog())
    a.push_back({{"key", e.key},
                 {"description", e.description},
                 {"anchor", e.anchor},
                 {"params", e.defaults},
                 {"integrals", e.integrals}});
  return a;
}

std::string catalog_table() {
  std::ostringstream out;
  out << std::left << std::setw(20) << "key" << std::setw(44) << "anchor" << "integrals\n";
  for (const auto& e : list_catalog()) {
    std::string ints;
    for (const auto& n : e.integrals) ints += (ints.empty() ? "" : " ") + n;
    out << std::setw(20) << e.key << std::setw(44) << e.anchor << ints << "\n"
        << std::setw(20) << "" << e.description << "\n"
        << std::setw(20) << "" << "params " << e.defaults.dump() << "\n";
  }
  return out.str();
}

}  // namespace geolab::cli
