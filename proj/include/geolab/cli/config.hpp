#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geolab/core/errors.hpp"
#include "geolab/core/model.hpp"
#include "json.hpp"

namespace geolab::cli {

inline constexpr int kSchemaVersion = 1;

/// Config problem, with the offending field and (when known) its position.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& msg, int line = -1, int column = -1);
  std::string field;
  int line = -1;
  int column = -1;
};

/// Function claimed to be a first integral by the config (negative controls).
struct DeclaredIntegral {
  std::string name;
  std::size_t coordinate = 0;  // index into the (x, p) phase vector
};

struct IntegrationBlock {
  double dt = 1e-3;
  double t_end = 10.0;
  std::size_t sample_every = 10;
  bool write_trajectories = true;
};

/// Check name -> tolerance. Names: commutation, conservation, energy,
/// constraint, completeness (tolerance = relative rank threshold).
using CheckSet = std::map<std::string, double>;

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  std::string model_key;
  nlohmann::json params = nlohmann::json::object();
  std::vector<DeclaredIntegral> declared;
  std::size_t state_count = 4;
  std::vector<CotangentState> explicit_states;
  std::optional<IntegrationBlock> integration;
  CheckSet checks;
  std::size_t completeness_samples = 20;
  std::filesystem::path output_dir = "geolab_out";

  /// Echo of the config as parsed, in schema form.
  nlohmann::json to_json() const;
};

const std::vector<std::string>& known_checks();
/// Defaults used by `verify`.
CheckSet default_checks();

RunConfig parse_config_string(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace geolab::cli
