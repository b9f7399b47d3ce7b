#pragma once

#include <string>

#include "ctrfact/causal.hpp"
#include "ctrfact/states.hpp"

namespace ctrfact {

// A loaded model file. Two shapes are accepted:
//   plain      — fields gamma, base, valuation, sigma_extra?, constraint?
//   equational — fields equations (atom -> formula string), valuation
// All field-level problems raise std::runtime_error naming the field.
struct ModelFile {
  bool equational = false;
  std::vector<FormulaPtr> gamma;       // plain only
  std::vector<FormulaPtr> base_;       // plain: must each occur in gamma
  std::set<std::string> valuation;
  std::set<std::string> sigma_extra;   // plain only, optional
  FormulaPtr constraint;               // plain only, null when absent
  std::map<std::string, FormulaPtr> equations;  // equational only
};

ModelFile parse_model(const std::string& json_text);
ModelFile load_model(const std::string& path);

// Context for evaluating psi against the model. Plain models carry their own
// gamma and constraint; an equational model's vocabulary defaults to its base
// extended with psi's causal-relevance bodies, and its sigma to the base
// atoms plus psi's.
Context model_context(const ModelFile& m, const FormulaPtr& psi);

// The model's anchor state, with the valuation restricted to ctx's sigma.
State model_state(const ModelFile& m, const Context& ctx);

// The equational view; throws if the model is not equational.
EquationalState model_equational(const ModelFile& m);

}  // namespace ctrfact
