#include <algorithm>
#include <functional>
#include <map>

#include "geolab/catalog/catalog.hpp"
#include "geolab/core/errors.hpp"

namespace geolab {

namespace {

using json = nlohmann::json;

struct Builder {
  json defaults;
  std::function<GeodesicModel(const json&)> build;
};

Eigen::VectorXd vec(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw ParameterError(std::string(name) + ": expected a non-empty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Eigen::Matrix2d mat2(const json& j) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
    throw ParameterError("B: expected a 2x2 nested array");
  Eigen::Matrix2d B;
  B << j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>();
  return B;
}

TrigSeries trig(const json& j) {
  TrigSeries t;
  t.c0 = j.value("c0", 0.0);
  t.cos_coeffs = j.value("cos", std::vector<double>{});
  t.sin_coeffs = j.value("sin", std::vector<double>{});
  return t;
}

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> r = {
      {"flat_torus",
       {{{"a", 1.0}, {"b", 0.0}, {"c", 1.0}},
        [](const json& p) { return flat_torus(p["a"], p["b"], p["c"]); }}},
      {"sphere", {json::object(), [](const json&) { return round_sphere(); }}},
      {"revolution",
       {{{"profile", "torus"}, {"R", 2.0}, {"rho", 1.0}},
        [](const json& p) {
          const std::string prof = p["profile"];
          if (prof == "torus") return surface_of_revolution(torus_profile(p["R"], p["rho"]));
          if (prof == "sphere") return surface_of_revolution(sphere_profile());
          throw ParameterError("revolution: unknown profile '" + prof + "'");
        }}},
      {"liouville",
       {{{"f", {{"c0", 1.0}, {"cos", {0.5}}}}, {"g", {{"c0", 1.0}}}},
        [](const json& p) { return liouville_surface(trig(p["f"]), trig(p["g"])); }}},
      {"ellipsoid",
       {{{"a", {3.0, 2.0, 1.0}}},
        [](const json& p) { return ellipsoid_moser({vec(p["a"], "a")}); }}},
      {"neumann",
       {{{"a", {1.5, 1.0, 0.5}}, {"h", 2.0}, {"system", false}},
        [](const json& p) {
          MaupertuisConfig cfg;
          cfg.a = vec(p["a"], "a");
          cfg.h = p["h"];
          auto both = neumann_maupertuis(cfg);
          return p["system"].get<bool>() ? both.neumann : both.geodesic;
        }}},
      {"brailov",
       {{{"a", {3.0, 2.0, 1.0, 0.5}}, {"b", {-1.0 / 3.0, -0.5, -1.0, 1.0}}, {"deformed", false}},
        [](const json& p) { return brailov_manakov_sphere(vec(p["a"], "a"), vec(p["b"], "b"), p["deformed"]); }}},
      {"projective",
       {{{"a", {3.0, 2.0, 1.0}}},
        [](const json& p) { return projective_family({vec(p["a"], "a")}).g_bar; }}},
      {"kovalevskaya",
       {{{"h", 2.0}}, [](const json& p) { return rigid_body_maupertuis(RigidBodyCase::kovalevskaya, p["h"]); }}},
      {"goryachev_chaplygin",
       {{{"h", 2.0}},
        [](const json& p) { return rigid_body_maupertuis(RigidBodyCase::goryachev_chaplygin, p["h"]); }}},
      {"sol", {{{"B", {{2, 1}, {1, 1}}}}, [](const json& p) { return sol_manifold(mat2(p["B"])); }}},
      {"nil", {{{"B", {{1, 1}, {0, 1}}}}, [](const json& p) { return sol_manifold(mat2(p["B"])); }}},
  };
  return r;
}

const Builder& lookup(const std::string& key) {
  for (const auto& [k, b] : registry())
    if (k == key) return b;
  throw ParameterError("unknown catalog key '" + key + "'");
}

}  // namespace

bool has_model(const std::string& key) {
  const auto& r = registry();
  return std::any_of(r.begin(), r.end(), [&](const auto& e) { return e.first == key; });
}

GeodesicModel build_model(const std::string& key, const json& params) {
  const Builder& b = lookup(key);
  if (!params.is_null() && !params.is_object()) throw ParameterError(key + ": parameters must be a mapping");
  json merged = b.defaults;
  if (params.is_object())
    for (const auto& [name, value] : params.items()) {
      if (!merged.contains(name)) throw ParameterError(key + ": unknown parameter '" + name + "'");
      merged[name] = value;
    }
  try {
    return b.build(merged);
  } catch (const json::exception& e) {
    throw ParameterError(key + ": bad parameter value (" + e.what() + ")");
  }
}

std::vector<CatalogEntry> list_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& [key, b] : registry()) {
    const GeodesicModel m = b.build(b.defaults);
    CatalogEntry e{key, m.description, m.anchor, b.defaults, {}};
    for (const auto& f : m.integrals) e.integrals.push_back(f.name);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace geolab
