#include "liouville/model.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace liouville {

namespace {

using nlohmann::json;

const std::set<std::string> kRoles = {"generating",  "constrained",
                                      "two_point",   "lagrangian",
                                      "hamiltonian", "relation"};

const std::set<std::string> kKnownKeys = {
    "name",     "base_dim",   "role",      "description", "U",
    "g",        "W",          "F",         "L",           "H",
    "kinetic",  "potential",  "theta",     "integrator",  "tolerance",
    "limits"};

std::string role_key(const std::string& role) {
  if (role == "generating" || role == "constrained") return "U";
  if (role == "two_point") return "W";
  if (role == "relation") return "F";
  if (role == "lagrangian") return "L";
  return "H";
}

ExprPtr parse_field(const json& doc, const std::string& key) {
  if (!doc.at(key).is_string())
    throw ModelError("key \"" + key + "\" must be an expression string");
  try {
    return parse_expression(doc.at(key).get<std::string>());
  } catch (const ParseError& e) {
    throw ModelError("key \"" + key + "\": " + e.what());
  }
}

}  // namespace

std::vector<std::string> config_vars(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("q" + std::to_string(i));
  return v;
}

std::vector<std::string> velocity_vars(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("v" + std::to_string(i));
  return v;
}

std::vector<std::string> momentum_vars(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("p" + std::to_string(i));
  return v;
}

std::vector<std::string> two_point_vars(int n) {
  std::vector<std::string> v = config_vars(n);
  for (int i = 1; i <= n; ++i) v.push_back("q0_" + std::to_string(i));
  return v;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelError("model file " + path + " is not valid JSON: " +
                     e.what());
  }
  if (!doc.is_object()) throw ModelError("model file must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.count(key))
      throw ModelError("unknown key \"" + key + "\" in " + path);
  for (const char* key : {"name", "base_dim", "role"})
    if (!doc.contains(key))
      throw ModelError("missing key \"" + std::string(key) + "\" in " + path);

  ModelFile model;
  model.name = doc.at("name").get<std::string>();
  if (!doc.at("base_dim").is_number_integer() ||
      doc.at("base_dim").get<int>() < 1)
    throw ModelError("key \"base_dim\" must be a positive integer");
  model.base_dim = doc.at("base_dim").get<int>();
  model.role = doc.at("role").get<std::string>();
  if (!kRoles.count(model.role))
    throw ModelError("unknown role \"" + model.role + "\"");

  const std::string main_key = role_key(model.role);
  if (!doc.contains(main_key))
    throw ModelError("role \"" + model.role + "\" requires key \"" +
                     main_key + "\"");
  model.expressions[main_key] = parse_field(doc, main_key);
  for (const char* key : {"kinetic", "potential"})
    if (doc.contains(key)) model.expressions[key] = parse_field(doc, key);

  if (model.role == "constrained") {
    if (!doc.contains("g") || !doc.at("g").is_array() || doc.at("g").empty())
      throw ModelError(
          "role \"constrained\" requires a non-empty array key \"g\"");
    for (std::size_t i = 0; i < doc.at("g").size(); ++i) {
      if (!doc.at("g")[i].is_string())
        throw ModelError("entries of \"g\" must be expression strings");
      try {
        model.constraints.push_back(
            parse_expression(doc.at("g")[i].get<std::string>()));
      } catch (const ParseError& e) {
        throw ModelError("key \"g\"[" + std::to_string(i) + "]: " + e.what());
      }
    }
  } else if (doc.contains("g")) {
    throw ModelError("key \"g\" is only valid for role \"constrained\"");
  }

  if (doc.contains("theta")) {
    if (!doc.at("theta").is_array() ||
        static_cast<int>(doc.at("theta").size()) != 2 * model.base_dim)
      throw ModelError("key \"theta\" must list " +
                       std::to_string(2 * model.base_dim) +
                       " coefficient expressions");
    for (std::size_t i = 0; i < doc.at("theta").size(); ++i) {
      if (!doc.at("theta")[i].is_string())
        throw ModelError("entries of \"theta\" must be expression strings");
      try {
        model.theta_override.push_back(
            parse_expression(doc.at("theta")[i].get<std::string>()));
      } catch (const ParseError& e) {
        throw ModelError("key \"theta\"[" + std::to_string(i) +
                         "]: " + e.what());
      }
    }
  }

  if (doc.contains("integrator")) {
    const json& integ = doc.at("integrator");
    if (!integ.is_object())
      throw ModelError("key \"integrator\" must be an object");
    for (const auto& [key, value] : integ.items())
      if (key != "method" && key != "h" && key != "t_end" && key != "x0")
        throw ModelError("unknown integrator key \"" + key + "\"");
    model.has_integrator = true;
    if (integ.contains("method"))
      model.integrator.method = integ.at("method").get<std::string>();
    if (integ.contains("h")) model.integrator.h = integ.at("h").get<double>();
    if (integ.contains("t_end"))
      model.integrator.t_end = integ.at("t_end").get<double>();
    if (integ.contains("x0")) {
      if (!integ.at("x0").is_array())
        throw ModelError("integrator key \"x0\" must be an array of numbers");
      model.integrator.x0.resize(integ.at("x0").size());
      for (std::size_t i = 0; i < integ.at("x0").size(); ++i)
        model.integrator.x0[static_cast<Eigen::Index>(i)] =
            integ.at("x0")[i].get<double>();
    }
    if (model.integrator.h <= 0.0)
      throw ModelError("integrator step \"h\" must be positive");
  }

  if (doc.contains("tolerance"))
    model.tolerance = doc.at("tolerance").get<double>();
  if (doc.contains("limits")) {
    const json& limits = doc.at("limits");
    if (!limits.is_object())
      throw ModelError("key \"limits\" must be an object");
    for (const auto& [key, value] : limits.items()) {
      if (key == "residual")
        model.dynamics_residual_limit = value.get<double>();
      else if (key == "drift_fraction")
        model.drift_fraction_limit = value.get<double>();
      else
        throw ModelError("unknown limits key \"" + key + "\"");
    }
  }
  return model;
}

LiouvilleStructure structure_from_model(const ModelFile& model) {
  const int n = model.base_dim;
  if (model.theta_override.empty()) {
    LiouvilleStructure l = canonical_structure(n);
    l.label = model.name;
    return l;
  }
  std::vector<std::string> vars = config_vars(n);
  const std::vector<std::string> momenta = momentum_vars(n);
  vars.insert(vars.end(), momenta.begin(), momenta.end());
  std::vector<SmoothFn> coeffs;
  for (const ExprPtr& e : model.theta_override) {
    try {
      coeffs.push_back(bind_expression(e, vars));
    } catch (const std::invalid_argument& err) {
      throw ModelError("key \"theta\": " + std::string(err.what()));
    }
  }
  Form theta{2 * n, 1,
             [coeffs](std::span<const JetScalar> x, std::span<const int> idx) {
               return coeffs[idx[0]](x);
             }};
  return {n, n, theta, model.name};
}

}  // namespace liouville
