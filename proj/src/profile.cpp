#include "percept/profile.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "percept/errors.hpp"

namespace percept {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kNoDescriptors;

// --- schema helpers -------------------------------------------------------

std::string child_path(const std::string& path, const std::string& key) {
  return path + "/" + key;
}
std::string child_path(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

void require_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(child_path(path, key), "unknown key");
  }
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  auto s = v.get<std::string>();
  if (s.empty()) throw SchemaError(path, "must be non-empty");
  return s;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

const json& get_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

std::vector<std::string> get_string_list(const json& v, const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& e : get_array(v, path)) out.push_back(get_string(e, child_path(path, i++)));
  return out;
}

std::vector<double> get_number_list(const json& v, const std::string& path) {
  std::vector<double> out;
  std::size_t i = 0;
  for (const auto& e : get_array(v, path)) out.push_back(get_number(e, child_path(path, i++)));
  return out;
}

SignificationKind parse_kind(const json& v, const std::string& path) {
  auto s = get_string(v, path);
  if (s == "orientation") return SignificationKind::kOrientation;
  if (s == "matrix") return SignificationKind::kMatrix;
  if (s == "empty") return SignificationKind::kEmpty;
  throw SchemaError(path, "expected \"orientation\", \"matrix\" or \"empty\"");
}

const char* kind_name(SignificationKind k) {
  switch (k) {
    case SignificationKind::kOrientation: return "orientation";
    case SignificationKind::kMatrix: return "matrix";
    case SignificationKind::kEmpty: return "empty";
  }
  return "";
}

std::pair<std::string, std::string> unordered_key(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw NonFiniteValue(what + " must be finite");
}

}  // namespace

std::string to_string(Tau tau) { return tau == Tau::kSum ? "sum" : "mean"; }

Tau parse_tau(std::string_view s) {
  if (s == "sum") return Tau::kSum;
  if (s == "mean") return Tau::kMean;
  throw ValidationError("unknown tau '" + std::string(s) + "' (expected sum or mean)");
}

const std::vector<std::string>& ReceiverProfile::descriptors_of(const std::string& variable) const {
  auto it = descriptors.find(variable);
  return it == descriptors.end() ? kNoDescriptors : it->second;
}

NoiseParams ReceiverProfile::noise_of(const std::string& variable) const {
  auto it = noise.find(variable);
  return it == noise.end() ? NoiseParams{} : it->second;
}

ReceiverProfile parse_profile(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  require_keys(doc, "", {"id", "variables", "descriptors", "assumed_edges", "significations",
                         "noise", "tau", "interventions"});

  ReceiverProfile p;
  if (!doc.contains("id")) throw SchemaError("/id", "required");
  if (!doc.contains("variables")) throw SchemaError("/variables", "required");
  p.id = get_string(doc["id"], "/id");
  p.variables = get_string_list(doc["variables"], "/variables");

  if (doc.contains("descriptors")) {
    const auto& d = doc["descriptors"];
    if (!d.is_object()) throw SchemaError("/descriptors", "expected an object");
    for (const auto& [var, list] : d.items())
      p.descriptors[var] = get_string_list(list, child_path("/descriptors", var));
  }

  if (doc.contains("assumed_edges")) {
    std::size_t i = 0;
    for (const auto& e : get_array(doc["assumed_edges"], "/assumed_edges")) {
      const auto path = child_path("/assumed_edges", i++);
      require_keys(e, path, {"from", "to", "weight"});
      if (!e.contains("from") || !e.contains("to")) throw SchemaError(path, "needs from and to");
      AssumedEdge edge{get_string(e["from"], path + "/from"), get_string(e["to"], path + "/to"), {}};
      if (e.contains("weight")) edge.weight = get_number(e["weight"], path + "/weight");
      p.assumed_edges.push_back(std::move(edge));
    }
  }

  if (doc.contains("significations")) {
    std::size_t i = 0;
    for (const auto& s : get_array(doc["significations"], "/significations")) {
      const auto path = child_path("/significations", i++);
      require_keys(s, path, {"pair", "kind", "weight", "phi_bar"});
      if (!s.contains("pair") || !s.contains("kind")) throw SchemaError(path, "needs pair and kind");
      auto pair = get_string_list(s["pair"], path + "/pair");
      if (pair.size() != 2) throw SchemaError(path + "/pair", "expected exactly two variables");
      Signification sig{pair[0], pair[1], parse_kind(s["kind"], path + "/kind"), {}, {}};
      if (s.contains("weight")) sig.weight = get_number(s["weight"], path + "/weight");
      if (s.contains("phi_bar")) {
        std::size_t r = 0;
        for (const auto& row : get_array(s["phi_bar"], path + "/phi_bar"))
          sig.phi_bar.push_back(get_number_list(row, child_path(path + "/phi_bar", r++)));
        if (sig.phi_bar.empty()) throw SchemaError(path + "/phi_bar", "must have at least one row");
      }
      if (sig.kind == SignificationKind::kMatrix && !s.contains("phi_bar"))
        throw SchemaError(path, "matrix signification needs phi_bar");
      if (sig.kind != SignificationKind::kMatrix && s.contains("phi_bar"))
        throw SchemaError(path + "/phi_bar", "only allowed for kind \"matrix\"");
      if (sig.kind != SignificationKind::kOrientation && s.contains("weight"))
        throw SchemaError(path + "/weight", "only allowed for kind \"orientation\"");
      p.significations.push_back(std::move(sig));
    }
  }

  if (doc.contains("noise")) {
    const auto& n = doc["noise"];
    if (!n.is_object()) throw SchemaError("/noise", "expected an object");
    for (const auto& [var, spec] : n.items()) {
      const auto path = child_path("/noise", var);
      require_keys(spec, path, {"mean", "var"});
      if (!spec.contains("mean") || !spec.contains("var")) throw SchemaError(path, "needs mean and var");
      p.noise[var] = {get_number(spec["mean"], path + "/mean"), get_number(spec["var"], path + "/var")};
    }
  }

  if (doc.contains("tau")) {
    auto t = get_string(doc["tau"], "/tau");
    if (t != "sum" && t != "mean") throw SchemaError("/tau", "expected \"sum\" or \"mean\"");
    p.tau = parse_tau(t);
  }

  if (doc.contains("interventions")) {
    const auto& iv = doc["interventions"];
    if (!iv.is_object()) throw SchemaError("/interventions", "expected an object");
    InterventionPlan plan;
    for (const auto& [key, value] : iv.items()) {
      const auto path = child_path("/interventions", key);
      if (key == "max_order") {
        if (!value.is_number_unsigned()) throw SchemaError(path, "expected a non-negative integer");
        plan.max_order = value.get<std::size_t>();
      } else {
        plan.grid[key] = get_number_list(value, path);
      }
    }
    p.interventions = std::move(plan);
  }

  validate_profile(p);
  return p;
}

void validate_profile(const ReceiverProfile& p) {
  if (p.id.empty()) throw ValidationError("profile id must be non-empty");
  std::set<std::string> vars;
  for (const auto& v : p.variables) {
    if (v.empty()) throw ValidationError("variable names must be non-empty");
    if (!vars.insert(v).second) throw DuplicateNode("duplicate variable '" + v + "'");
  }
  auto declared = [&](const std::string& v, const std::string& where) {
    if (!vars.count(v)) throw UnknownVariable(where + " references undeclared variable '" + v + "'");
  };

  for (const auto& [var, list] : p.descriptors) {
    declared(var, "descriptors");
    std::set<std::string> seen;
    for (const auto& d : list)
      if (d.empty() || !seen.insert(d).second)
        throw ValidationError("descriptors of '" + var + "' must be unique and non-empty");
  }

  std::set<std::pair<std::string, std::string>> stated;
  auto claim = [&](const std::string& a, const std::string& b, const std::string& where) {
    declared(a, where);
    declared(b, where);
    if (a == b) throw ValidationError(where + " relates '" + a + "' to itself");
    if (!stated.insert(unordered_key(a, b)).second)
      throw ValidationError("more than one statement about the pair (" + a + ", " + b + ")");
  };

  for (const auto& e : p.assumed_edges) {
    claim(e.from, e.to, "assumed edge");
    if (e.weight) require_finite(*e.weight, "assumed edge weight");
  }
  for (const auto& s : p.significations) {
    claim(s.from, s.to, "signification");
    if (s.weight) require_finite(*s.weight, "signification weight");
    if (s.kind != SignificationKind::kMatrix) continue;
    const auto& rows = p.descriptors_of(s.from);
    const auto& cols = p.descriptors_of(s.to);
    if (rows.empty() || cols.empty())
      throw MissingDescriptors("weight matrix for (" + s.from + ", " + s.to +
                               ") needs descriptors on both sides");
    bool shape_ok = s.phi_bar.size() == rows.size();
    for (const auto& row : s.phi_bar) {
      shape_ok = shape_ok && row.size() == cols.size();
      for (double w : row) require_finite(w, "phi_bar entry");
    }
    if (!shape_ok)
      throw ValidationError("weight matrix for (" + s.from + ", " + s.to + ") must be " +
                            std::to_string(rows.size()) + "x" + std::to_string(cols.size()));
  }

  for (const auto& [var, n] : p.noise) {
    declared(var, "noise");
    require_finite(n.mean, "noise mean");
    require_finite(n.var, "noise variance");
    if (n.var < 0.0) throw ValidationError("noise variance of '" + var + "' is negative");
  }

  if (p.interventions)
    for (const auto& [var, values] : p.interventions->grid) {
      declared(var, "interventions");
      for (double v : values) require_finite(v, "intervention value");
    }

  // Acyclicity of the stated orientations.
  std::vector<NamePair> edges;
  for (const auto& e : p.assumed_edges) edges.emplace_back(e.from, e.to);
  for (const auto& s : p.significations)
    if (s.kind != SignificationKind::kEmpty) edges.emplace_back(s.from, s.to);
  (void)CausalGraph::build(p.variables, edges);
}

std::string serialize_profile(const ReceiverProfile& p) {
  ordered_json doc;
  doc["id"] = p.id;
  doc["variables"] = p.variables;
  ordered_json desc = ordered_json::object();
  for (const auto& [var, list] : p.descriptors) desc[var] = list;
  doc["descriptors"] = desc;

  ordered_json assumed = ordered_json::array();
  for (const auto& e : p.assumed_edges) {
    ordered_json j{{"from", e.from}, {"to", e.to}};
    if (e.weight) j["weight"] = *e.weight;
    assumed.push_back(j);
  }
  doc["assumed_edges"] = assumed;

  ordered_json sigs = ordered_json::array();
  for (const auto& s : p.significations) {
    ordered_json j{{"pair", {s.from, s.to}}, {"kind", kind_name(s.kind)}};
    if (s.weight) j["weight"] = *s.weight;
    if (s.kind == SignificationKind::kMatrix) j["phi_bar"] = s.phi_bar;
    sigs.push_back(j);
  }
  doc["significations"] = sigs;

  ordered_json noise = ordered_json::object();
  for (const auto& [var, n] : p.noise) noise[var] = {{"mean", n.mean}, {"var", n.var}};
  doc["noise"] = noise;
  doc["tau"] = to_string(p.tau);
  if (p.interventions) {
    ordered_json iv = ordered_json::object();
    for (const auto& [var, values] : p.interventions->grid) iv[var] = values;
    iv["max_order"] = p.interventions->max_order;
    doc["interventions"] = iv;
  }
  return doc.dump(2) + "\n";
}

double aggregate_weights(const std::vector<std::vector<double>>& phi_bar, Tau tau) {
  double total = 0.0;
  for (const auto& row : phi_bar)
    for (double w : row) total += w;
  if (tau == Tau::kSum || phi_bar.empty()) return total;
  return total / static_cast<double>(phi_bar.size());
}

LinearScm assemble_high_level(const ReceiverProfile& p) {
  validate_profile(p);
  std::vector<NamePair> edges;
  LinearScm::CoefficientMap coef;
  for (const auto& e : p.assumed_edges) {
    edges.emplace_back(e.from, e.to);
    coef[{e.from, e.to}] = e.weight.value_or(1.0);
  }
  for (const auto& s : p.significations) {
    if (s.kind == SignificationKind::kEmpty) continue;
    edges.emplace_back(s.from, s.to);
    coef[{s.from, s.to}] = s.kind == SignificationKind::kMatrix ? aggregate_weights(s.phi_bar, p.tau)
                                                                : s.weight.value_or(1.0);
  }
  LinearScm::NoiseMap noise;
  for (const auto& v : p.variables) noise[v] = p.noise_of(v);
  return LinearScm::create(CausalGraph::build(p.variables, edges), coef, noise);
}

std::string descriptor_node(const std::string& variable, const std::string& descriptor) {
  return variable + "." + descriptor;
}

LinearScm assemble_low_level(const ReceiverProfile& p) {
  validate_profile(p);
  std::vector<std::string> nodes;
  LinearScm::NoiseMap noise;
  for (const auto& v : p.variables) {
    const auto& ds = p.descriptors_of(v);
    const auto share = static_cast<double>(ds.size());
    const auto n = p.noise_of(v);
    for (const auto& d : ds) {
      nodes.push_back(descriptor_node(v, d));
      noise[nodes.back()] = {n.mean / share, n.var / share};
    }
  }

  std::vector<NamePair> edges;
  LinearScm::CoefficientMap coef;
  for (const auto& s : p.significations) {
    if (s.kind != SignificationKind::kMatrix) continue;
    const auto& rows = p.descriptors_of(s.from);
    const auto& cols = p.descriptors_of(s.to);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        NamePair e{descriptor_node(s.from, rows[i]), descriptor_node(s.to, cols[j])};
        edges.push_back(e);
        coef[e] = s.phi_bar[i][j];
      }
  }
  return LinearScm::create(CausalGraph::build(std::move(nodes), edges), coef, noise);
}

InterventionSet profile_interventions(const ReceiverProfile& p) {
  if (!p.interventions) return InterventionSet{};
  return enumerate_interventions(p.interventions->grid, p.interventions->max_order);
}

}  // namespace percept
