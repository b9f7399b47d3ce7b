#pragma once

#include "ctrfact/checker.hpp"

namespace ctrfact {

// A state whose base is a set of equations p <-> omega_p with at most one
// equation per head and no head occurring in its own body, plus a compatible
// valuation.
struct EquationalState {
  std::map<std::string, FormulaPtr> equations;  // head -> body
  std::set<std::string> valuation;

  EquationalState(std::map<std::string, FormulaPtr> equations_,
                  std::set<std::string> valuation_);
  EquationalState(const std::vector<EquationalFormula>& eqs,
                  std::set<std::string> valuation_);

  // The base as iff formulas, in head order.
  std::vector<FormulaPtr> base() const;
};

// Graph node standing for the constant true (present when a constant occurs
// in some equation body; false is ~true and counts as an occurrence).
extern const std::string kTopNode;

struct CausalGraph {
  std::vector<std::string> nodes;  // sorted
  std::map<std::string, std::set<std::string>> parents;
};

// Endogenous variables are the equation heads; exogenous the remaining
// atoms of the base. Returned as (endogenous, exogenous).
std::pair<std::set<std::string>, std::set<std::string>> classify_variables(
    const EquationalState& s);

CausalGraph build_causal_graph(const std::map<std::string, FormulaPtr>& equations);
CausalGraph build_causal_graph(const EquationalState& s);
bool is_dag(const CausalGraph& g);
// Parents-first order, ties broken alphabetically; throws on a cycle.
std::vector<std::string> topo_order(const CausalGraph& g);

// An intervention fixes each variable in its domain to a constant.
using Intervention = std::map<std::string, bool>;

// The conjunction of literals an intervention enforces.
FormulaPtr intervention_conjunct(const Intervention& e);

// Replace the equation of each intervened variable by head <-> true/false;
// intervened variables without an equation gain one.
std::map<std::string, FormulaPtr> intervene_base(
    const std::map<std::string, FormulaPtr>& equations, const Intervention& e);

// The unique successor state under an intervention on a DAG base whose
// off-head valuation is kept: intervened and derived heads are re-solved in
// topological order, everything else retains its value.
EquationalState solve_post_intervention(const EquationalState& s,
                                        const Intervention& e);

// The exogenous variables of the state pinned to their actual values.
Term exo_term(const EquationalState& s);

// The but-condition: some sign pattern imposed on the term's atoms,
// together with freezing some disjoint endogenous variables at their actual
// values, drives the (unique) successor to falsify omega. Requires a DAG
// base, a term over endogenous atoms, and omega over the base's atoms.
bool but_condition(const EquationalState& s, const Term& lambda,
                   const FormulaPtr& omega);

// The same condition as one might-counterfactual disjunction over the sign
// patterns of the term's atoms, checked against gamma = base(S). Requires
// additionally that the state satisfies the term.
bool but_condition_via_might(const EquationalState& s, const Term& lambda,
                             const FormulaPtr& omega);

// Actual causation: the state satisfies term and effect, the but-condition
// holds, and it holds for no strict subterm.
bool is_actual_cause(const EquationalState& s, const Term& lambda,
                     const FormulaPtr& omega);

// The same verdict as a single counterfactual formula checked against
// gamma = base(S): the term holds, flipping it entirely might falsify the
// effect, and every strict subterm's sign patterns would preserve it.
// Requires a nonempty term.
bool actual_cause_via_counterfactuals(const EquationalState& s,
                                      const Term& lambda,
                                      const FormulaPtr& omega);

// All actual causes of the effect among terms of at most max_size
// endogenous atoms at their actual polarities, smaller terms first.
std::vector<Term> enumerate_actual_causes(const EquationalState& s,
                                          const FormulaPtr& omega,
                                          int max_size);

}  // namespace ctrfact
