// Command-line front end: model checking, closest-set listing, actual-cause
// queries, QBF encoding export, QBF file evaluation, and the differential
// validation suites.
//
// Exit codes: 0 verdict true / suite pass, 1 verdict false / suite failure,
// 2 error, 3 cross-check disagreement between independent routes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ctrfact/causal.hpp"
#include "ctrfact/checker.hpp"
#include "ctrfact/formula.hpp"
#include "ctrfact/model_io.hpp"
#include "ctrfact/qbf.hpp"
#include "ctrfact/validate.hpp"

namespace {

using nlohmann::json;
using namespace ctrfact;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;
constexpr int kExitDisagree = 3;

// A term on the command line is a conjunction of distinct literals, e.g.
// "st" or "st & ~bt".
Term term_from_text(const std::string& text) {
  Term t = parse_term(text);
  if (t.empty()) throw std::runtime_error("term: at least one literal needed");
  return t;
}

json state_json(const State& s) {
  json base = json::array();
  for (const auto& g : s.base) base.push_back(render_formula(g));
  json val = json::array();
  for (const auto& a : s.valuation) val.push_back(a);
  return json{{"base", base}, {"valuation", val}};
}

std::string state_text(const State& s) {
  std::string out = "base={";
  for (std::size_t i = 0; i < s.base.size(); ++i)
    out += (i ? "; " : "") + render_formula(s.base[i]);
  out += "} valuation={";
  bool first = true;
  for (const auto& a : s.valuation) {
    out += (first ? "" : ", ") + a;
    first = false;
  }
  return out + "}";
}

json suite_json(const SuiteReport& r) {
  json kinds = json::object();
  for (const auto& [k, pf] : r.kinds)
    kinds[k] = json{{"passed", pf.first}, {"failed", pf.second}};
  return json{{"name", r.name},
              {"passed", r.passed},
              {"failed", r.failed},
              {"kinds", kinds},
              {"details", r.details}};
}

void print_suite_text(const SuiteReport& r) {
  std::printf("%-18s passed=%-5d failed=%d\n", r.name.c_str(), r.passed,
              r.failed);
  for (const auto& [k, pf] : r.kinds)
    std::printf("  %-18s %d/%d\n", k.c_str(), pf.first, pf.first + pf.second);
  for (const auto& d : r.details) std::printf("  ! %s\n", d.c_str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Derived sigma of a context (atoms of gamma, the query, and the
// constraint); whatever the context carries beyond that is extra vocabulary
// that the encoder receives explicitly.
std::set<std::string> sigma_extras(const Context& ctx, const FormulaPtr& psi) {
  std::set<std::string> derived;
  for (const auto& g : ctx.gamma)
    for (const auto& a : atoms_of(g)) derived.insert(a);
  for (const auto& a : atoms_of(psi)) derived.insert(a);
  if (ctx.constraint)
    for (const auto& a : atoms_of(ctx.constraint)) derived.insert(a);
  std::set<std::string> extra;
  for (const auto& a : ctx.sigma)
    if (!derived.count(a)) extra.insert(a);
  return extra;
}

int cmd_check(const std::string& model_path, const std::string& formula_text,
              const std::string& via, bool as_json) {
  ModelFile m = load_model(model_path);
  FormulaPtr psi = parse_formula(formula_text);
  Context ctx = model_context(m, psi);
  State anchor = model_state(m, ctx);

  std::optional<bool> brute, qbf;
  if (via == "brute" || via == "both")
    brute = satisfies(anchor, ctx, psi);
  if (via == "qbf" || via == "both") {
    QbfPtr enc = encode_mc(psi, ctx.gamma, anchor, ctx.constraint,
                           sigma_extras(ctx, psi));
    qbf = eval_qbf(enc);
  }
  bool agree = !(brute && qbf) || *brute == *qbf;
  bool verdict = brute ? *brute : *qbf;

  if (as_json) {
    json via_obj = json::object();
    if (brute) via_obj["brute"] = *brute;
    if (qbf) via_obj["qbf"] = *qbf;
    json out{{"command", "check"},
             {"model", model_path},
             {"formula", render_formula(psi)},
             {"via", via_obj},
             {"agreement", agree},
             {"verdict", verdict}};
    std::cout << out.dump(2) << "\n";
  } else {
    if (brute) std::printf("brute: %s\n", *brute ? "true" : "false");
    if (qbf) std::printf("qbf:   %s\n", *qbf ? "true" : "false");
    if (!agree)
      std::printf("DISAGREEMENT between the brute-force and QBF routes\n");
    else
      std::printf("verdict: %s\n", verdict ? "true" : "false");
  }
  if (!agree) return kExitDisagree;
  return verdict ? kExitTrue : kExitFalse;
}

int cmd_closest(const std::string& model_path, const std::string& formula_text,
                bool as_json) {
  ModelFile m = load_model(model_path);
  FormulaPtr phi = parse_formula(formula_text);
  Context ctx = model_context(m, phi);
  State anchor = model_state(m, ctx);
  std::vector<State> cs = closest_set(phi, anchor, ctx);
  if (as_json) {
    json arr = json::array();
    for (const auto& s : cs) arr.push_back(state_json(s));
    json out{{"command", "closest"},
             {"model", model_path},
             {"formula", render_formula(phi)},
             {"count", cs.size()},
             {"closest", arr}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("%zu closest state(s) of %s\n", cs.size(),
                render_formula(phi).c_str());
    for (const auto& s : cs) std::printf("  %s\n", state_text(s).c_str());
  }
  return kExitTrue;
}

int cmd_cause(const std::string& model_path, const std::string& term_text,
              const std::string& effect_text, const std::string& via,
              bool as_json) {
  ModelFile m = load_model(model_path);
  EquationalState s = model_equational(m);
  Term lambda = term_from_text(term_text);
  FormulaPtr omega = parse_prop(effect_text);

  std::optional<bool> interv, ctf;
  if (via == "interventions" || via == "both")
    interv = is_actual_cause(s, lambda, omega);
  if (via == "counterfactuals" || via == "both")
    ctf = actual_cause_via_counterfactuals(s, lambda, omega);
  bool agree = !(interv && ctf) || *interv == *ctf;
  bool verdict = interv ? *interv : *ctf;

  if (as_json) {
    json via_obj = json::object();
    if (interv) via_obj["interventions"] = *interv;
    if (ctf) via_obj["counterfactuals"] = *ctf;
    json out{{"command", "cause"},
             {"model", model_path},
             {"term", render_term(lambda)},
             {"effect", render_formula(omega)},
             {"via", via_obj},
             {"agreement", agree},
             {"verdict", verdict}};
    std::cout << out.dump(2) << "\n";
  } else {
    if (interv)
      std::printf("interventions:   %s\n", *interv ? "true" : "false");
    if (ctf)
      std::printf("counterfactuals: %s\n", *ctf ? "true" : "false");
    if (!agree)
      std::printf("DISAGREEMENT between the two cause routes\n");
    else
      std::printf("verdict: %s\n", verdict ? "true" : "false");
  }
  if (!agree) return kExitDisagree;
  return verdict ? kExitTrue : kExitFalse;
}

int cmd_causes(const std::string& model_path, const std::string& effect_text,
               int max_size, bool as_json) {
  ModelFile m = load_model(model_path);
  EquationalState s = model_equational(m);
  FormulaPtr omega = parse_prop(effect_text);
  std::vector<Term> found = enumerate_actual_causes(s, omega, max_size);
  if (as_json) {
    json arr = json::array();
    for (const auto& t : found) arr.push_back(render_term(t));
    json out{{"command", "causes"},
             {"model", model_path},
             {"effect", render_formula(omega)},
             {"max_size", max_size},
             {"causes", arr}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("%zu actual cause(s) of %s up to size %d\n", found.size(),
                render_formula(omega).c_str(), max_size);
    for (const auto& t : found) std::printf("  %s\n", render_term(t).c_str());
  }
  return found.empty() ? kExitFalse : kExitTrue;
}

int cmd_encode(const std::string& model_path, const std::string& query,
               const std::string& format, const std::string& out_path) {
  ModelFile m = load_model(model_path);
  QbfPtr enc;
  std::string trimmed = query;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.erase(trimmed.begin());
  if (trimmed.rfind("cause(", 0) == 0) {
    if (trimmed.back() != ')')
      throw std::runtime_error("cause query: expected cause(<term>, <effect>)");
    std::string inner = trimmed.substr(6, trimmed.size() - 7);
    auto comma = inner.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("cause query: expected cause(<term>, <effect>)");
    Term lambda = term_from_text(inner.substr(0, comma));
    FormulaPtr omega = parse_prop(inner.substr(comma + 1));
    enc = encode_actual_cause(lambda, omega, model_equational(m));
  } else {
    FormulaPtr psi = parse_formula(query);
    Context ctx = model_context(m, psi);
    State anchor = model_state(m, ctx);
    enc = encode_mc(psi, ctx.gamma, anchor, ctx.constraint,
                    sigma_extras(ctx, psi));
  }
  std::string text = format == "qcir" ? export_qcir(enc) : export_qdimacs(enc);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  out.close();
  std::printf("wrote %s (%zu bytes, %s)\n", out_path.c_str(), text.size(),
              format.c_str());
  return kExitTrue;
}

int cmd_eval_qbf(const std::string& path, bool as_json) {
  std::string text = read_file(path);
  std::size_t i = 0;
  while (i < text.size() &&
         std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  std::string kind;
  QbfPtr f;
  if (i < text.size() && text[i] == '#') {
    kind = "qcir";
    f = parse_qcir(text);
  } else {
    kind = "qdimacs";
    f = parse_qdimacs(text);
  }
  auto free_vars = qbf_free_vars(f);
  if (!free_vars.empty())
    throw std::runtime_error("eval-qbf: the formula must be closed (free: " +
                             *free_vars.begin() + " ...)");
  bool verdict = eval_qbf(f);
  if (as_json) {
    json out{{"command", "eval-qbf"},
             {"path", path},
             {"format", kind},
             {"verdict", verdict}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("%s (%s): %s\n", path.c_str(), kind.c_str(),
                verdict ? "true" : "false");
  }
  return verdict ? kExitTrue : kExitFalse;
}

int cmd_validate(std::uint64_t seed, int samples, bool as_json) {
  struct Row {
    const char* label;
    SuiteReport (*fn)(std::uint64_t, int);
  } rows[] = {
      {"validities", run_validity_suite},
      {"causal", run_causal_suite},
      {"qbf-mc", run_qbf_mc_suite},
      {"hardness", run_hardness_suite},
      {"context-stability", run_context_stability_suite},
      {"cause-encoding", run_cause_encoding_suite},
  };
  bool all_ok = true;
  json arr = json::array();
  for (const auto& row : rows) {
    SuiteReport r = row.fn(seed, samples);
    all_ok = all_ok && r.ok();
    if (as_json)
      arr.push_back(suite_json(r));
    else
      print_suite_text(r);
  }
  if (as_json) {
    json out{{"command", "validate"},
             {"seed", seed},
             {"samples", samples},
             {"suites", arr},
             {"pass", all_ok}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("overall: %s\n", all_ok ? "pass" : "FAIL");
  }
  return all_ok ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Model checker and actual-cause engine for counterfactual "
      "conditionals over causal bases"};
  app.require_subcommand(1);

  std::string model_path, formula_text, term_text, effect_text, out_path;
  std::string via_check = "brute", via_cause = "both";
  std::string report_format = "text", enc_format = "qcir";
  int max_size = 2, samples = 100;
  std::uint64_t seed = 42;

  auto add_report_format = [&](CLI::App* sub) {
    sub->add_option("--format", report_format,
                    "Report format: text or json (default text)")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* check = app.add_subcommand("check", "Check a formula at a model");
  check->add_option("model", model_path, "Model file (JSON)")->required();
  check->add_option("formula", formula_text, "Formula to check")->required();
  check->add_option("--via", via_check, "Route: brute, qbf, or both")
      ->check(CLI::IsMember({"brute", "qbf", "both"}));
  add_report_format(check);

  CLI::App* closest =
      app.add_subcommand("closest", "List the closest antecedent states");
  closest->add_option("model", model_path, "Model file (JSON)")->required();
  closest->add_option("formula", formula_text, "Antecedent")->required();
  add_report_format(closest);

  CLI::App* cause = app.add_subcommand("cause", "Decide an actual-cause query");
  cause->add_option("model", model_path, "Equational model file")->required();
  cause->add_option("term", term_text, "Candidate cause (literal conjunction)")
      ->required();
  cause->add_option("effect", effect_text, "Effect formula (propositional)")
      ->required();
  cause
      ->add_option("--via", via_cause,
                   "Route: interventions, counterfactuals, or both")
      ->check(CLI::IsMember({"interventions", "counterfactuals", "both"}));
  add_report_format(cause);

  CLI::App* causes =
      app.add_subcommand("causes", "Enumerate actual causes of an effect");
  causes->add_option("model", model_path, "Equational model file")->required();
  causes->add_option("effect", effect_text, "Effect formula")->required();
  causes->add_option("--max-size", max_size, "Largest term size (default 2)");
  add_report_format(causes);

  CLI::App* encode = app.add_subcommand(
      "encode", "Export the QBF encoding of a formula or cause(<term>, <effect>)");
  encode->add_option("model", model_path, "Model file (JSON)")->required();
  encode->add_option("query", formula_text, "Formula or cause(<term>, <effect>)")
      ->required();
  encode->add_option("--format", enc_format, "qcir (default) or qdimacs")
      ->check(CLI::IsMember({"qcir", "qdimacs"}));
  encode->add_option("-o,--output", out_path, "Output path")->required();

  CLI::App* evalq =
      app.add_subcommand("eval-qbf", "Evaluate a QCIR or QDIMACS file");
  evalq->add_option("path", out_path, "QBF file")->required();
  add_report_format(evalq);

  CLI::App* validate =
      app.add_subcommand("validate", "Run the differential validation suites");
  validate->add_option("--seed", seed, "Random seed (default 42)");
  validate->add_option("--samples", samples,
                       "Samples per suite (default 100)");
  add_report_format(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitTrue : kExitError;
  }

  try {
    bool as_json = report_format == "json";
    if (check->parsed())
      return cmd_check(model_path, formula_text, via_check, as_json);
    if (closest->parsed())
      return cmd_closest(model_path, formula_text, as_json);
    if (cause->parsed())
      return cmd_cause(model_path, term_text, effect_text, via_cause, as_json);
    if (causes->parsed())
      return cmd_causes(model_path, effect_text, max_size, as_json);
    if (encode->parsed())
      return cmd_encode(model_path, formula_text, enc_format, out_path);
    if (evalq->parsed()) return cmd_eval_qbf(out_path, as_json);
    if (validate->parsed())
      return cmd_validate(seed, samples, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
