// geolab command line front-end.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "geolab/catalog/catalog.hpp"
#include "geolab/cli/runner.hpp"
#include "geolab/entropy/entropy.hpp"

using namespace geolab;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

void print_summary(const cli::ReportBundle& rb) {
  for (const auto& v : rb.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.check << " [" << v.subject << "] measured " << v.measured
              << " threshold " << v.threshold << "\n";
  std::cout << rb.verdicts.size() << " checks, " << rb.failures() << " failed\n";
}

std::filesystem::path out_dir_for(const cli::RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  return cli::resolve_output_dir(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geolab: integrable geodesic flows, Poisson brackets and entropy"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  auto* run_cmd = app.add_subcommand("run", "execute a YAML run config");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_flag, "output directory (overrides config and environment)");

  bool as_json = false;
  auto* cat_cmd = app.add_subcommand("catalog", "list catalog models");
  cat_cmd->add_flag("--json", as_json, "machine-readable listing");

  std::string key;
  std::uint64_t seed = 0;
  std::vector<std::string> tol_specs;
  std::string verify_out;
  auto* ver_cmd = app.add_subcommand("verify", "run the default verification suite on a catalog model");
  ver_cmd->add_option("model", key, "catalog key")->required();
  ver_cmd->add_option("--seed", seed, "random seed");
  ver_cmd->add_option("--tol", tol_specs, "override a tolerance, name=value (repeatable)");
  ver_cmd->add_option("--out", verify_out, "write report.json here");

  std::vector<double> b_entries;
  EntropyConfig ecfg;
  double return_dt = 0.0;
  std::string entropy_out;
  auto* ent_cmd = app.add_subcommand("entropy", "entropy of the toral automorphism B = (b11 b12; b21 b22)");
  ent_cmd->add_option("B", b_entries, "b11 b12 b21 b22")->required()->expected(4);
  ent_cmd->add_option("--grid", ecfg.grid, "grid resolution per axis");
  ent_cmd->add_option("--eps", ecfg.epsilons, "epsilon list");
  ent_cmd->add_option("--T", ecfg.horizons, "horizon list");
  ent_cmd->add_option("--seed", ecfg.seed, "grid jitter seed");
  ent_cmd->add_option("--return-map-dt", return_dt, "also integrate the SOL/NIL return map with this step");
  ent_cmd->add_option("--out", entropy_out, "write entropy.json and entropy.csv here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const cli::RunConfig cfg = cli::load_config(config_path);
      const auto dir = out_dir_for(cfg, out_flag);
      const cli::ReportBundle rb = cli::run(cfg, dir);
      print_summary(rb);
      std::cout << "report: " << (dir / "report.json").string() << "\n";
      return rb.all_pass() ? 0 : kExitFail;
    }
    if (*cat_cmd) {
      if (as_json)
        std::cout << cli::catalog_json().dump(2) << "\n";
      else
        std::cout << cli::catalog_table();
      return 0;
    }
    if (*ver_cmd) {
      cli::CheckSet overrides;
      for (const auto& spec : tol_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw cli::ConfigError("--tol", "expected name=value, got '" + spec + "'");
        try {
          overrides[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
          throw cli::ConfigError("--tol", "bad number in '" + spec + "'");
        }
      }
      const cli::RunConfig cfg = cli::verify_config(key, seed, overrides);
      std::filesystem::path dir = verify_out;
      if (dir.empty())
        if (const char* env = std::getenv(cli::kOutputDirEnv); env && *env) dir = env;
      const cli::ReportBundle rb = cli::run(cfg, dir);
      print_summary(rb);
      return rb.all_pass() ? 0 : kExitFail;
    }
    if (*ent_cmd) {
      Eigen::Matrix2d B;
      B << b_entries[0], b_entries[1], b_entries[2], b_entries[3];
      nlohmann::json j;
      j["B"] = {{B(0, 0), B(0, 1)}, {B(1, 0), B(1, 1)}};
      j["exact"] = toral_entropy_exact(B);
      const EntropyEstimate est = spanning_entropy_estimate(linear_torus_map(B), ecfg);
      j["estimate"] = est.to_json();
      if (return_dt > 0.0) j["return_map"] = sol_return_map(make_sol_model(B), return_dt).to_json();
      std::filesystem::path dir = entropy_out;
      if (dir.empty())
        if (const char* env = std::getenv(cli::kOutputDirEnv); env && *env) dir = env;
      if (!dir.empty()) {
        cli::write_atomic(dir / "entropy.json", j.dump(2) + "\n");
        std::ostringstream csv;
        est.write_csv(csv);
        cli::write_atomic(dir / "entropy.csv", csv.str());
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const ParameterError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
