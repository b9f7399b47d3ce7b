#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

#include "ctrfact/formula.hpp"

namespace ctrfact {

// Classical truth of a propositional formula in a valuation (the set of true
// atoms). Throws on non-propositional input.
bool eval_prop(const FormulaPtr& f, const std::set<std::string>& valuation);

// Same, against a bitmask valuation over an indexed vocabulary; atoms
// outside the vocabulary count as false.
bool eval_prop_mask(const FormulaPtr& f, std::uint32_t mask,
                    const std::unordered_map<std::string, int>& atom_idx);

// A valuation is compatible with a causal base when it satisfies every
// member of the base.
bool is_compatible(const std::vector<FormulaPtr>& base,
                   const std::set<std::string>& valuation);

// Sort by compare() and drop structural duplicates.
std::vector<FormulaPtr> canonical_formulas(std::vector<FormulaPtr> fs);

// A state pairs a causal base with a compatible valuation. The base is held
// canonically sorted so states compare structurally.
struct State {
  std::vector<FormulaPtr> base;
  std::set<std::string> valuation;

  State() = default;
  State(std::vector<FormulaPtr> base_, std::set<std::string> valuation_);
};

bool operator==(const State& a, const State& b);
bool operator!=(const State& a, const State& b);

// A context of evaluation: the admissible base formulas gamma, the atom
// vocabulary sigma (which must cover gamma and the constraint), and a
// propositional constraint every valuation must satisfy (top by default).
struct Context {
  std::vector<FormulaPtr> gamma;  // duplicate-free, input order preserved
  std::set<std::string> sigma;
  FormulaPtr constraint;

  Context(std::vector<FormulaPtr> gamma_, std::set<std::string> sigma_,
          FormulaPtr constraint_ = nullptr);
};

// Enumeration ceiling on |gamma| + |sigma|; defaults to 20, overridable via
// the CTRFACT_STATE_BOUND environment variable.
int state_bound();

// Every state (C, V) with C a subset of gamma and V a subset of sigma
// satisfying the constraint and compatible with C. Ordered by base subset
// (gamma-index mask ascending) and, within a base, by valuation (sigma-index
// mask ascending). Throws BoundError past the ceiling.
std::vector<State> enumerate_context(const Context& ctx);

// The comparative-similarity preorder centered on the anchor: a is at least
// as close as b when the anchor's base overlaps b's base nowhere it does not
// also overlap a's, and a's valuation diverges from the anchor's nowhere b's
// does not also diverge.
bool at_least_as_close(const State& anchor, const State& a, const State& b);
bool strictly_closer(const State& anchor, const State& a, const State& b);

using SatCallback = std::function<bool(const State&, const FormulaPtr&)>;

// The phi-satisfying states of the context none of which another
// phi-satisfying state strictly beats in similarity to the anchor; the
// anchor must itself belong to the context's enumeration. Order follows
// enumerate_context.
std::vector<State> closest(const FormulaPtr& phi, const State& anchor,
                           const Context& ctx, const SatCallback& eval);

}  // namespace ctrfact
