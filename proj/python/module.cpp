// Python bindings: a thin string-first surface over the core operations.
// Inputs take the same shapes as the model files — plain models as
// gamma/base/valuation (+ optional constraint, sigma_extra), equational
// models as an equations dict plus a valuation — and are validated by the
// same code path as file loading.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>
#include <optional>

#include "ctrfact/model_io.hpp"
#include "ctrfact/qbf.hpp"
#include "ctrfact/validate.hpp"

namespace py = pybind11;
using namespace ctrfact;

namespace {

ModelFile plain_model(const std::vector<std::string>& gamma,
                      const std::vector<std::string>& base,
                      const std::vector<std::string>& valuation,
                      const std::optional<std::string>& constraint,
                      const std::vector<std::string>& sigma_extra) {
  nlohmann::json root;
  root["gamma"] = gamma;
  root["base"] = base;
  root["valuation"] = valuation;
  if (constraint) root["constraint"] = *constraint;
  if (!sigma_extra.empty()) root["sigma_extra"] = sigma_extra;
  return parse_model(root.dump());
}

ModelFile equational_model(const std::map<std::string, std::string>& equations,
                           const std::vector<std::string>& valuation) {
  nlohmann::json root;
  root["equations"] = equations;
  root["valuation"] = valuation;
  return parse_model(root.dump());
}

// The sigma atoms the standard checking problem would not derive on its
// own, to reproduce the context's vocabulary in the encoding route.
std::set<std::string> undervived_sigma(const Context& ctx, const FormulaPtr& psi) {
  std::set<std::string> derived;
  for (const auto& g : ctx.gamma)
    for (const auto& a : atoms_of(g)) derived.insert(a);
  for (const auto& a : atoms_of(psi)) derived.insert(a);
  for (const auto& a : atoms_of(ctx.constraint)) derived.insert(a);
  std::set<std::string> extra;
  for (const auto& a : ctx.sigma)
    if (!derived.count(a)) extra.insert(a);
  return extra;
}

bool check(const std::string& psi_text, const std::vector<std::string>& gamma,
           const std::vector<std::string>& base,
           const std::vector<std::string>& valuation,
           const std::optional<std::string>& constraint,
           const std::vector<std::string>& sigma_extra,
           const std::string& via) {
  FormulaPtr psi = parse_formula(psi_text);
  ModelFile m = plain_model(gamma, base, valuation, constraint, sigma_extra);
  Context ctx = model_context(m, psi);
  State s = model_state(m, ctx);
  std::optional<bool> brute, enc;
  if (via == "brute" || via == "both") brute = satisfies(s, ctx, psi);
  if (via == "qbf" || via == "both")
    enc = eval_qbf(encode_mc(psi, ctx.gamma, s,
                             m.constraint ? m.constraint : nullptr,
                             undervived_sigma(ctx, psi)));
  if (!brute && !enc)
    throw std::invalid_argument("via must be brute, qbf, or both");
  if (brute && enc && *brute != *enc)
    throw std::runtime_error(
        "route disagreement: enumeration says " +
        std::string(*brute ? "true" : "false") + ", encoding says " +
        std::string(*enc ? "true" : "false"));
  return brute ? *brute : *enc;
}

py::list closest_py(const std::string& phi_text,
                    const std::vector<std::string>& gamma,
                    const std::vector<std::string>& base,
                    const std::vector<std::string>& valuation,
                    const std::optional<std::string>& constraint,
                    const std::vector<std::string>& sigma_extra) {
  FormulaPtr phi = parse_formula(phi_text);
  ModelFile m = plain_model(gamma, base, valuation, constraint, sigma_extra);
  Context ctx = model_context(m, phi);
  State anchor = model_state(m, ctx);
  py::list out;
  for (const State& t : closest_set(phi, anchor, ctx)) {
    py::list bs;
    for (const auto& f : t.base) bs.append(render_formula(f));
    py::list vs;
    for (const auto& a : t.valuation) vs.append(a);
    out.append(py::make_tuple(bs, vs));
  }
  return out;
}

bool is_cause(const std::string& term_text, const std::string& effect_text,
              const std::map<std::string, std::string>& equations,
              const std::vector<std::string>& valuation,
              const std::string& via) {
  EquationalState s = model_equational(equational_model(equations, valuation));
  Term lambda = parse_term(term_text);
  FormulaPtr omega = parse_prop(effect_text);
  if (via == "interventions") return is_actual_cause(s, lambda, omega);
  if (via == "counterfactuals")
    return actual_cause_via_counterfactuals(s, lambda, omega);
  if (via == "encoding")
    return eval_qbf(encode_actual_cause(lambda, omega, s));
  if (via != "both")
    throw std::invalid_argument(
        "via must be interventions, counterfactuals, encoding, or both");
  bool interv = is_actual_cause(s, lambda, omega);
  bool ctf = actual_cause_via_counterfactuals(s, lambda, omega);
  if (interv != ctf)
    throw std::runtime_error(
        "route disagreement: interventions say " +
        std::string(interv ? "true" : "false") + ", counterfactuals say " +
        std::string(ctf ? "true" : "false"));
  return interv;
}

std::vector<std::string> causes(
    const std::string& effect_text,
    const std::map<std::string, std::string>& equations,
    const std::vector<std::string>& valuation, int max_size) {
  EquationalState s = model_equational(equational_model(equations, valuation));
  std::vector<std::string> out;
  for (const Term& t :
       enumerate_actual_causes(s, parse_prop(effect_text), max_size))
    out.push_back(render_term(t));
  return out;
}

std::string render_qbf(const QbfPtr& q, const std::string& fmt) {
  if (fmt == "qcir") return export_qcir(q);
  if (fmt == "qdimacs") return export_qdimacs(q);
  throw std::invalid_argument("format must be qcir or qdimacs");
}

std::string encode(const std::string& psi_text,
                   const std::vector<std::string>& gamma,
                   const std::vector<std::string>& base,
                   const std::vector<std::string>& valuation,
                   const std::optional<std::string>& constraint,
                   const std::vector<std::string>& sigma_extra,
                   const std::string& fmt) {
  FormulaPtr psi = parse_formula(psi_text);
  ModelFile m = plain_model(gamma, base, valuation, constraint, sigma_extra);
  Context ctx = model_context(m, psi);
  State s = model_state(m, ctx);
  return render_qbf(encode_mc(psi, ctx.gamma, s,
                              m.constraint ? m.constraint : nullptr,
                              undervived_sigma(ctx, psi)),
                    fmt);
}

std::string encode_cause(const std::string& term_text,
                         const std::string& effect_text,
                         const std::map<std::string, std::string>& equations,
                         const std::vector<std::string>& valuation,
                         const std::string& fmt) {
  EquationalState s = model_equational(equational_model(equations, valuation));
  return render_qbf(
      encode_actual_cause(parse_term(term_text), parse_prop(effect_text), s),
      fmt);
}

bool eval_qbf_text(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    QbfPtr q = c == '#' ? parse_qcir(text) : parse_qdimacs(text);
    if (!qbf_free_vars(q).empty())
      throw std::invalid_argument("the formula must be closed");
    return eval_qbf(q);
  }
  throw std::invalid_argument("empty input");
}

py::dict report_dict(const SuiteReport& r) {
  py::dict d;
  d["passed"] = r.passed;
  d["failed"] = r.failed;
  d["details"] = r.details;
  py::dict kinds;
  for (const auto& [k, pf] : r.kinds)
    kinds[py::str(k)] = py::make_tuple(pf.first, pf.second);
  d["kinds"] = kinds;
  return d;
}

py::dict validate(const std::string& suite, std::uint64_t seed, int samples) {
  std::vector<std::pair<std::string, SuiteReport (*)(std::uint64_t, int)>>
      suites = {{"validities", run_validity_suite},
                {"causal", run_causal_suite},
                {"qbf-mc", run_qbf_mc_suite},
                {"hardness", run_hardness_suite},
                {"context-stability", run_context_stability_suite},
                {"cause-encoding", run_cause_encoding_suite}};
  py::dict out;
  bool matched = false;
  for (const auto& [name, fn] : suites) {
    if (suite != "all" && suite != name) continue;
    matched = true;
    out[py::str(name)] = report_dict(fn(seed, samples));
  }
  if (!matched)
    throw std::invalid_argument("unknown suite '" + suite + "'");
  return out;
}

}  // namespace

PYBIND11_MODULE(_ctrfact, mod) {
  mod.doc() =
      "Model checking and actual-cause analysis for counterfactual "
      "conditionals over causal bases";

  mod.def("check", &check, py::arg("psi"),
          py::arg("gamma") = std::vector<std::string>{},
          py::arg("base") = std::vector<std::string>{},
          py::arg("valuation") = std::vector<std::string>{},
          py::arg("constraint") = std::nullopt,
          py::arg("sigma_extra") = std::vector<std::string>{},
          py::arg("via") = "brute",
          "Truth of a formula at the model's state; via is brute, qbf, or "
          "both (both raises on disagreement).");

  mod.def("closest", &closest_py, py::arg("phi"),
          py::arg("gamma") = std::vector<std::string>{},
          py::arg("base") = std::vector<std::string>{},
          py::arg("valuation") = std::vector<std::string>{},
          py::arg("constraint") = std::nullopt,
          py::arg("sigma_extra") = std::vector<std::string>{},
          "The closest antecedent states, each as (base formulas, true "
          "atoms).");

  mod.def("is_cause", &is_cause, py::arg("term"), py::arg("effect"),
          py::arg("equations"), py::arg("valuation"),
          py::arg("via") = "interventions",
          "Whether the term is an actual cause of the effect; via is "
          "interventions, counterfactuals, encoding, or both (both raises "
          "on disagreement).");

  mod.def("causes", &causes, py::arg("effect"), py::arg("equations"),
          py::arg("valuation"), py::arg("max_size") = 2,
          "All actual causes of the effect up to the given term size, "
          "rendered smallest first.");

  mod.def("encode", &encode, py::arg("psi"),
          py::arg("gamma") = std::vector<std::string>{},
          py::arg("base") = std::vector<std::string>{},
          py::arg("valuation") = std::vector<std::string>{},
          py::arg("constraint") = std::nullopt,
          py::arg("sigma_extra") = std::vector<std::string>{},
          py::arg("fmt") = "qcir",
          "The checking problem as a closed QBF in qcir or qdimacs text.");

  mod.def("encode_cause", &encode_cause, py::arg("term"), py::arg("effect"),
          py::arg("equations"), py::arg("valuation"), py::arg("fmt") = "qcir",
          "The actual-cause decision as a closed QBF in qcir or qdimacs "
          "text.");

  mod.def("eval_qbf", &eval_qbf_text, py::arg("text"),
          "Evaluate closed QCIR ('#...' header) or QDIMACS text.");

  mod.def("validate", &validate, py::arg("suite") = "all",
          py::arg("seed") = 42, py::arg("samples") = 100,
          "Run the differential validation suites; returns per-suite "
          "pass/fail counts, failure details, and per-kind tallies.");

  mod.attr("__version__") = "0.1.0";
}
