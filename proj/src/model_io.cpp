#include "ctrfact/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ctrfact {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::runtime_error("model field '" + field + "': " + what);
}

FormulaPtr parse_field_prop(const std::string& field, const std::string& text) {
  try {
    return parse_prop(text);
  } catch (const ParseError& e) {
    fail(field, std::string(e.what()));
  }
}

std::set<std::string> atom_list(const json& arr, const std::string& field) {
  if (!arr.is_array()) fail(field, "expected a list of atom names");
  std::set<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    std::string f = field + "[" + std::to_string(i) + "]";
    if (!v.is_string()) fail(f, "expected an atom name string");
    std::string a = v.get<std::string>();
    if (!is_valid_atom_name(a)) fail(f, "invalid atom name '" + a + "'");
    out.insert(a);
  }
  return out;
}

}  // namespace

ModelFile parse_model(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("model: ") + e.what());
  }
  if (!root.is_object()) throw std::runtime_error("model: expected a JSON object");

  ModelFile m;
  m.equational = root.contains("equations");
  static const std::set<std::string> plain_keys{"gamma", "base", "valuation",
                                               "sigma_extra", "constraint"};
  static const std::set<std::string> eq_keys{"equations", "valuation"};
  const auto& allowed = m.equational ? eq_keys : plain_keys;
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (!allowed.count(key))
      fail(key, m.equational ? "not valid in an equational model"
                             : "unknown field");
  }

  if (m.equational) {
    const auto& eqs = root["equations"];
    if (!eqs.is_object()) fail("equations", "expected an object of atom -> formula");
    for (const auto& [head, body] : eqs.items()) {
      std::string f = "equations." + head;
      if (!is_valid_atom_name(head)) fail(f, "invalid atom name '" + head + "'");
      if (!body.is_string()) fail(f, "expected a formula string");
      m.equations[head] = parse_field_prop(f, body.get<std::string>());
    }
    if (root.contains("valuation"))
      m.valuation = atom_list(root["valuation"], "valuation");
    // Validates head-not-in-body, one equation per head, compatibility.
    try {
      EquationalState probe(m.equations, m.valuation);
    } catch (const std::invalid_argument& e) {
      fail("equations", e.what());
    }
    return m;
  }

  if (!root.contains("gamma")) fail("gamma", "missing (or use 'equations')");
  const auto& g = root["gamma"];
  if (!g.is_array()) fail("gamma", "expected a list of formula strings");
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::string f = "gamma[" + std::to_string(i) + "]";
    if (!g[i].is_string()) fail(f, "expected a formula string");
    m.gamma.push_back(parse_field_prop(f, g[i].get<std::string>()));
  }
  if (root.contains("base")) {
    const auto& b = root["base"];
    if (!b.is_array()) fail("base", "expected a list of formula strings");
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::string f = "base[" + std::to_string(i) + "]";
      if (!b[i].is_string()) fail(f, "expected a formula string");
      FormulaPtr bf = parse_field_prop(f, b[i].get<std::string>());
      bool found = false;
      for (const auto& gf : m.gamma)
        if (equal(bf, gf)) {
          found = true;
          break;
        }
      if (!found)
        fail(f, "'" + render_formula(bf) + "' does not occur in gamma");
      m.base_.push_back(std::move(bf));
    }
  }
  if (root.contains("valuation"))
    m.valuation = atom_list(root["valuation"], "valuation");
  if (root.contains("sigma_extra"))
    m.sigma_extra = atom_list(root["sigma_extra"], "sigma_extra");
  if (root.contains("constraint")) {
    const auto& c = root["constraint"];
    if (!c.is_string()) fail("constraint", "expected a formula string");
    m.constraint = parse_field_prop("constraint", c.get<std::string>());
  }
  // Compatibility of the anchor.
  for (const auto& bf : m.base_)
    if (!eval_prop(bf, m.valuation))
      fail("valuation",
           "does not satisfy base formula '" + render_formula(bf) + "'");
  return m;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Context model_context(const ModelFile& m, const FormulaPtr& psi) {
  std::vector<FormulaPtr> gamma;
  FormulaPtr chi;
  std::set<std::string> sigma;
  if (m.equational) {
    EquationalState s(m.equations, m.valuation);
    gamma = s.base();
    for (const auto& d : delta_bodies(psi)) {
      bool dup = false;
      for (const auto& g : gamma)
        if (equal(d, g)) {
          dup = true;
          break;
        }
      if (!dup) gamma.push_back(d);
    }
  } else {
    gamma = m.gamma;
    chi = m.constraint;
    sigma = m.sigma_extra;
  }
  for (const auto& g : gamma)
    for (const auto& a : atoms_of(g)) sigma.insert(a);
  for (const auto& a : atoms_of(psi)) sigma.insert(a);
  if (chi)
    for (const auto& a : atoms_of(chi)) sigma.insert(a);
  return Context(std::move(gamma), std::move(sigma), chi ? chi : top());
}

State model_state(const ModelFile& m, const Context& ctx) {
  std::set<std::string> val;
  for (const auto& p : m.valuation)
    if (ctx.sigma.count(p)) val.insert(p);
  if (m.equational) {
    EquationalState s(m.equations, m.valuation);
    return State(s.base(), std::move(val));
  }
  return State(m.base_, std::move(val));
}

EquationalState model_equational(const ModelFile& m) {
  if (!m.equational)
    throw std::runtime_error(
        "model is not equational (no 'equations' field); cause analysis "
        "needs structural equations");
  return EquationalState(m.equations, m.valuation);
}

}  // namespace ctrfact
