#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>

#include "ctrfact/states.hpp"

namespace ctrfact {

// Packed enumeration of a context with memoized satisfaction, shared by the
// brute-force checking route, the closest-worlds listing, and the validity
// search. States are (base mask over gamma order, valuation mask over sorted
// sigma). Satisfaction memos key on Formula node identity; queried formulas
// are pinned for the lifetime of the space.
class StateSpace {
 public:
  explicit StateSpace(const Context& ctx);

  int size() const { return static_cast<int>(states_.size()); }
  const Context& context() const { return ctx_; }
  State state_at(int i) const;
  // Index of a structurally equal state, or -1.
  int index_of(const State& s) const;

  bool satisfies_at(int i, const FormulaPtr& f);
  // Indices of the phi-closest states seen from the anchor index.
  std::vector<int> closest_indices(const FormulaPtr& phi, int anchor);

  bool packed_at_least_as_close(int anchor, int a, int b) const;
  bool packed_strictly_closer(int anchor, int a, int b) const;

 private:
  std::vector<signed char>& memo_row(const FormulaPtr& f);

  Context ctx_;
  std::vector<std::string> sigma_;  // sorted
  std::unordered_map<std::string, int> atom_idx_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> states_;  // (base, val)
  std::unordered_map<const Formula*, std::vector<signed char>> memo_;
  std::unordered_map<const Formula*, std::unordered_map<int, std::vector<int>>>
      closest_memo_;
  std::vector<FormulaPtr> pinned_;
};

// Truth of a (possibly counterfactual) formula at a state under a context;
// nested counterfactuals are evaluated against the same context.
bool satisfies(const State& state, const Context& ctx, const FormulaPtr& f);

// The checking problem in its standard shape: sigma is derived as the atoms
// of gamma, psi, and the constraint.
bool model_check(const FormulaPtr& psi, const std::vector<FormulaPtr>& gamma,
                 const State& state, const FormulaPtr& constraint = nullptr);

// Closest phi-states of the context seen from the anchor.
std::vector<State> closest_set(const FormulaPtr& phi, const State& anchor,
                               const Context& ctx);

struct SearchBounds {
  int max_gamma = 2;
  int max_sigma = 3;
  bool exhaustive = true;  // otherwise randomized
  int samples = 1000;      // random mode only
  std::uint64_t seed = 0;
};

struct Countermodel {
  Context ctx;
  State state;
};

// Search for a context and state falsifying f. Exhaustive mode enumerates
// contexts built from a finite pool of gamma formulas (literals and
// pairwise implications over the atoms of f) and constraints; random mode
// samples contexts over the atoms of f padded to max_sigma. Returns the
// first countermodel found, or nothing.
std::optional<Countermodel> check_validity(const FormulaPtr& f,
                                           const SearchBounds& bounds);

// Seeded generators used by the validity search and the differential
// suites. pick() is the shared uniform choice, stable across platforms.
int pick(std::mt19937_64& rng, int n);
FormulaPtr random_prop(std::mt19937_64& rng,
                       const std::vector<std::string>& atoms, int depth);
// cond_budget bounds the counterfactual nesting depth; Delta bodies stay
// propositional.
FormulaPtr random_cond(std::mt19937_64& rng,
                       const std::vector<std::string>& atoms, int depth,
                       int cond_budget);

}  // namespace ctrfact
