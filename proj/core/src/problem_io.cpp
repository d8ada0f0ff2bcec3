#include "hpencil/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hpencil/errors.hpp"

namespace hpencil::pencil {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError("missing key '" + key + "' in " + where);
  if (!obj[key].is_number()) throw ValidationError("key '" + key + "' in " + where + " must be a number");
  return obj[key].get<double>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ValidationError("missing key '" + key + "' in " + where);
  if (!obj[key].is_string()) throw ValidationError("key '" + key + "' in " + where + " must be an expression string");
  return obj[key].get<std::string>();
}

BoundaryCondition bc_from(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  reject_unknown_keys(obj, {"b0", "b1"}, where);
  BoundaryCondition bc{number_at(obj, "b0", where), number_at(obj, "b1", where)};
  bc.validate();
  return bc;
}

}  // namespace

PencilProblem problem_from_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("problem file must be a JSON object");
  reject_unknown_keys(root, {"domain", "D", "V", "W0", "poles", "bc_left", "bc_right"},
                      "problem file");

  if (!root.contains("domain") || !root["domain"].is_array() || root["domain"].size() != 2)
    throw ValidationError("problem file needs \"domain\": [a, b]");
  double a = root["domain"][0].get<double>();
  double b = root["domain"][1].get<double>();
  if (!(a < b)) throw ValidationError("domain requires a < b");

  PencilProblem p;
  p.a = a;
  p.b = b;
  p.D = coeffs::CoefficientField::from_source(string_at(root, "D", "problem file"), a, b);
  p.V = coeffs::CoefficientField::from_source(string_at(root, "V", "problem file"), a, b);
  p.W0 = coeffs::CoefficientField::from_source(string_at(root, "W0", "problem file"), a, b);

  if (root.contains("poles")) {
    if (!root["poles"].is_array()) throw ValidationError("\"poles\" must be an array");
    for (const auto& entry : root["poles"]) {
      if (!entry.is_object()) throw ValidationError("each pole must be an object");
      reject_unknown_keys(entry, {"alpha", "W"}, "pole entry");
      p.poles.push_back({number_at(entry, "alpha", "pole entry"),
                         coeffs::CoefficientField::from_source(
                             string_at(entry, "W", "pole entry"), a, b)});
    }
  }

  p.bc_left = root.contains("bc_left") ? bc_from(root["bc_left"], "bc_left")
                                       : BoundaryCondition::neumann();
  p.bc_right = root.contains("bc_right") ? bc_from(root["bc_right"], "bc_right")
                                         : BoundaryCondition::neumann();
  p.validate();
  return p;
}

PencilProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return problem_from_json(ss.str());
}

std::string problem_to_json(const PencilProblem& p) {
  auto expr_source = [](const coeffs::CoefficientField& f, const char* name) {
    auto src = f.source();
    if (!src)
      throw ValidationError(std::string("field ") + name +
                            " is not expression-backed and has no text form");
    return *src;
  };

  json root;
  root["domain"] = {p.a, p.b};
  root["D"] = expr_source(p.D, "D");
  root["V"] = expr_source(p.V, "V");
  root["W0"] = expr_source(p.W0, "W0");
  root["poles"] = json::array();
  for (const auto& pole : p.poles)
    root["poles"].push_back({{"alpha", pole.alpha}, {"W", expr_source(pole.weight, "W")}});
  root["bc_left"] = {{"b0", p.bc_left.b0}, {"b1", p.bc_left.b1}};
  root["bc_right"] = {{"b0", p.bc_right.b0}, {"b1", p.bc_right.b1}};
  return root.dump(2);
}

}  // namespace hpencil::pencil
