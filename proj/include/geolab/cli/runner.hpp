#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "geolab/cli/config.hpp"
#include "json.hpp"

namespace geolab::cli {

inline constexpr const char* kVersion = "0.1.0";
/// Overrides output.dir when set.
inline constexpr const char* kOutputDirEnv = "GEOLAB_OUTPUT_DIR";

struct Verdict {
  std::string check;
  std::string subject;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

struct ReportBundle {
  std::string model_key;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  nlohmann::json config;   // echo
  nlohmann::json details;  // per-check data (residual matrices, drift tables, ...)
  std::vector<std::string> artifacts;

  bool all_pass() const;
  std::size_t failures() const;
  /// Deterministic: contains no timestamps.
  nlohmann::json to_json() const;
};

/// Write-then-rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// output.dir, or the environment override.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

/// Executes the config. Writes report.json, run_meta.json (timestamps) and the
/// trajectory CSVs to out_dir when it is non-empty.
ReportBundle run(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Default verification config for a catalog model.
RunConfig verify_config(const std::string& key, std::uint64_t seed, const CheckSet& tolerance_overrides);

/// Catalog listing as JSON: [{key, description, anchor, params, integrals}].
nlohmann::json catalog_json();
std::string catalog_table();

}  // namespace geolab::cli
