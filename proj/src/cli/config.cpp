#include "geolab/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace geolab::cli {

namespace {

std::string where(int line, int column) {
  if (line < 0) return "";
  return "line " + std::to_string(line + 1) + ", column " + std::to_string(column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) {
  const auto m = node.Mark();
  throw ConfigError(field, msg, m.line, m.column);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, field, "cannot convert '" + node.Scalar() + "'");
  }
}

nlohmann::json to_json_value(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& n : node) a.push_back(to_json_value(n));
      return a;
    }
    case YAML::NodeType::Map: {
      nlohmann::json o = nlohmann::json::object();
      for (const auto& kv : node) o[kv.first.Scalar()] = to_json_value(kv.second);
      return o;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  if (s == "true" || s == "false") return s == "true";
  long long i;
  if (YAML::convert<long long>::decode(node, i) && s.find_first_of(".eE") == std::string::npos) return i;
  double d;
  if (YAML::convert<double>::decode(node, d)) return d;
  return s;
}

void reject_unknown(const YAML::Node& node, const std::string& section, std::initializer_list<const char*> allowed) {
  for (const auto& kv : node) {
    const std::string k = kv.first.Scalar();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(kv.first, section.empty() ? k : section + "." + k, "unknown field");
  }
}

Eigen::VectorXd vector_of(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
  Eigen::VectorXd v(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) v[i] = scalar<double>(node[i], field + "[" + std::to_string(i) + "]");
  return v;
}

RunConfig parse_root(const YAML::Node& root) {
  if (!root.IsMap()) fail(root, "<root>", "config must be a mapping");
  reject_unknown(root, "", {"schema_version", "seed", "model", "states", "integration", "verification", "output"});
  RunConfig cfg;
  if (!root["schema_version"]) throw ConfigError("schema_version", "required field is missing");
  cfg.schema_version = scalar<int>(root["schema_version"], "schema_version");
  if (cfg.schema_version != kSchemaVersion)
    fail(root["schema_version"], "schema_version",
         "unsupported version " + std::to_string(cfg.schema_version) + " (expected " +
             std::to_string(kSchemaVersion) + ")");
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed");

  const YAML::Node model = root["model"];
  if (!model) throw ConfigError("model", "required section is missing");
  if (!model.IsMap()) fail(model, "model", "expected a mapping");
  reject_unknown(model, "model", {"key", "params", "declare"});
  if (!model["key"]) fail(model, "model.key", "required field is missing");
  cfg.model_key = scalar<std::string>(model["key"], "model.key");
  if (model["params"]) {
    if (!model["params"].IsMap()) fail(model["params"], "model.params", "expected a mapping");
    cfg.params = to_json_value(model["params"]);
  }
  if (const YAML::Node decl = model["declare"]) {
    if (!decl.IsSequence()) fail(decl, "model.declare", "expected a list");
    for (std::size_t i = 0; i < decl.size(); ++i) {
      const std::string f = "model.declare[" + std::to_string(i) + "]";
      reject_unknown(decl[i], f, {"name", "coordinate"});
      if (!decl[i]["name"] || !decl[i]["coordinate"]) fail(decl[i], f, "needs name and coordinate");
      cfg.declared.push_back({scalar<std::string>(decl[i]["name"], f + ".name"),
                              scalar<std::size_t>(decl[i]["coordinate"], f + ".coordinate")});
    }
  }

  if (const YAML::Node states = root["states"]) {
    if (!states.IsMap()) fail(states, "states", "expected a mapping");
    reject_unknown(states, "states", {"count", "explicit"});
    if (states["count"]) cfg.state_count = scalar<std::size_t>(states["count"], "states.count");
    if (const YAML::Node ex = states["explicit"]) {
      if (!ex.IsSequence()) fail(ex, "states.explicit", "expected a list");
      for (std::size_t i = 0; i < ex.size(); ++i) {
        const std::string f = "states.explicit[" + std::to_string(i) + "]";
        reject_unknown(ex[i], f, {"x", "p"});
        if (!ex[i]["x"] || !ex[i]["p"]) fail(ex[i], f, "needs x and p");
        CotangentState s{vector_of(ex[i]["x"], f + ".x"), vector_of(ex[i]["p"], f + ".p")};
        if (s.x.size() != s.p.size()) fail(ex[i], f, "x and p differ in length");
        cfg.explicit_states.push_back(s);
      }
      cfg.state_count = cfg.explicit_states.size();
    }
  }

  if (const YAML::Node in = root["integration"]) {
    if (!in.IsMap()) fail(in, "integration", "expected a mapping");
    reject_unknown(in, "integration", {"dt", "t_end", "sample_every", "write_trajectories"});
    IntegrationBlock b;
    if (in["dt"]) b.dt = scalar<double>(in["dt"], "integration.dt");
    if (in["t_end"]) b.t_end = scalar<double>(in["t_end"], "integration.t_end");
    if (in["sample_every"]) b.sample_every = scalar<std::size_t>(in["sample_every"], "integration.sample_every");
    if (in["write_trajectories"])
      b.write_trajectories = scalar<bool>(in["write_trajectories"], "integration.write_trajectories");
    if (!(b.dt > 0.0)) fail(in["dt"], "integration.dt", "must be positive");
    if (!(b.t_end > 0.0)) fail(in["t_end"], "integration.t_end", "must be positive");
    if (b.sample_every == 0) fail(in["sample_every"], "integration.sample_every", "must be >= 1");
    cfg.integration = b;
  }

  if (const YAML::Node ver = root["verification"]) {
    if (!ver.IsNull()) {
      if (!ver.IsMap()) fail(ver, "verification", "expected a mapping");
      for (const auto& kv : ver) {
        const std::string name = kv.first.Scalar();
        const std::string f = "verification." + name;
        if (name == "samples") {
          cfg.completeness_samples = scalar<std::size_t>(kv.second, f);
          continue;
        }
        const auto& kc = known_checks();
        if (std::find(kc.begin(), kc.end(), name) == kc.end()) fail(kv.first, f, "unknown check");
        double tol = default_checks().at(name);
        if (kv.second.IsMap()) {
          reject_unknown(kv.second, f, {"tol"});
          if (kv.second["tol"]) tol = scalar<double>(kv.second["tol"], f + ".tol");
        } else if (!kv.second.IsNull()) {
          tol = scalar<double>(kv.second, f);
        }
        if (!(tol > 0.0)) fail(kv.second, f, "tolerance must be positive");
        cfg.checks[name] = tol;
      }
    }
  }
  for (const auto& [name, tol] : cfg.checks)
    if (name != "commutation" && name != "completeness" && !cfg.integration)
      throw ConfigError("verification." + name, "needs an integration block");

  if (const YAML::Node out = root["output"]) {
    if (!out.IsMap()) fail(out, "output", "expected a mapping");
    reject_unknown(out, "output", {"dir"});
    if (out["dir"]) cfg.output_dir = scalar<std::string>(out["dir"], "output.dir");
  }
  return cfg;
}

}  // namespace

ConfigError::ConfigError(const std::string& f, const std::string& msg, int l, int c)
    : Error("config: " + where(l, c) + f + ": " + msg), field(f), line(l), column(c) {}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"commutation", "conservation", "energy", "constraint", "completeness"};
  return names;
}

CheckSet default_checks() {
  return {{"commutation", 1e-9}, {"conservation", 1e-6}, {"energy", 1e-6}, {"constraint", 1e-10},
          {"completeness", 1e-8}};
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["seed"] = seed;
  j["model"] = {{"key", model_key}, {"params", params}};
  if (!declared.empty()) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& x : declared) d.push_back({{"name", x.name}, {"coordinate", x.coordinate}});
    j["model"]["declare"] = d;
  }
  if (explicit_states.empty()) {
    j["states"] = {{"count", state_count}};
  } else {
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& s : explicit_states)
      ex.push_back({{"x", std::vector<double>(s.x.begin(), s.x.end())},
                    {"p", std::vector<double>(s.p.begin(), s.p.end())}});
    j["states"] = {{"explicit", ex}};
  }
  if (integration)
    j["integration"] = {{"dt", integration->dt},
                        {"t_end", integration->t_end},
                        {"sample_every", integration->sample_every},
                        {"write_trajectories", integration->write_trajectories}};
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [name, tol] : checks) v[name] = tol;
  if (checks.count("completeness")) v["samples"] = completeness_samples;
  j["verification"] = v;
  j["output"] = {{"dir", output_dir.string()}};
  return j;
}

RunConfig parse_config_string(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.msg, e.mark.line, e.mark.column);
  }
  return parse_root(root);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str(), path.string());
}

}  // namespace geolab::cli
