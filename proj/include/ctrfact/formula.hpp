#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctrfact {

// Object language. The propositional layer is Atom..Iff; Delta adds the
// causal-relevance connective D(omega) with a propositional body; BoxRight
// and DiamondRight are the would- and might-counterfactual. Derived
// connectives (Or, Implies, Iff, DiamondRight) are first-class nodes.
enum class Kind {
  Atom,
  Top,
  Bot,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Delta,
  BoxRight,
  DiamondRight,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::string name;  // Atom only
  FormulaPtr left;   // operand of Not and Delta, left operand of binaries
  FormulaPtr right;  // right operand of binaries
  std::size_t hash;
};

// Node constructors. atom() rejects malformed names and the reserved words
// "true"/"false"; delta() rejects non-propositional bodies.
FormulaPtr atom(const std::string& name);
FormulaPtr top();
FormulaPtr bot();
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr delta(FormulaPtr body);
FormulaPtr box(FormulaPtr a, FormulaPtr b);
FormulaPtr diamond(FormulaPtr a, FormulaPtr b);

bool is_valid_atom_name(const std::string& name);

// Structural equality and a total order (used wherever formulas key a set).
bool equal(const FormulaPtr& a, const FormulaPtr& b);
int compare(const FormulaPtr& a, const FormulaPtr& b);

struct FormulaLess {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const {
    return compare(a, b) < 0;
  }
};

bool is_propositional(const FormulaPtr& f);
// True when no counterfactual occurs inside another counterfactual.
bool is_unnested(const FormulaPtr& f);
std::set<std::string> atoms_of(const FormulaPtr& f);
// Distinct bodies of D(...) subformulas, in the compare() order.
std::vector<FormulaPtr> delta_bodies(const FormulaPtr& f);

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_);
};

// Concrete syntax: atoms [A-Za-z_][A-Za-z0-9_]*, constants true/false,
// connectives ~ & | -> <-> D(.) []-> <>->. Precedence from tightest:
// ~, &, |, ->, <->, then the counterfactuals, which are non-associative
// and bind loosest; -> is right-associative, & | <-> left-associative.
FormulaPtr parse_formula(const std::string& text);
// Same grammar restricted to the propositional layer.
FormulaPtr parse_prop(const std::string& text);
std::string render_formula(const FormulaPtr& f);

struct BoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A term is a conjunction of literals, each atom at most once; true maps a
// positive occurrence. The empty term stands for true.
using Term = std::map<std::string, bool>;

// Literal-wise negation (bar lambda), an involution.
Term negate_term(const Term& t);
FormulaPtr term_formula(const Term& t);
std::string render_term(const Term& t);
// All 2^|atoms| sign patterns over exactly the given atoms, all-positive
// first, the sign of the smallest atom flipping fastest. Throws BoundError
// when |atoms| exceeds the bound.
std::vector<Term> enumerate_terms(const std::set<std::string>& atoms, int bound = 12);
bool is_strict_subterm(const Term& sub, const Term& full);
bool term_holds(const Term& t, const std::set<std::string>& valuation);
// Inverse of render_term: a conjunction of literals, or "true" for the
// empty term. Throws std::invalid_argument on any other shape.
Term parse_term(const std::string& text);

// One equation p <-> omega of an equational base; the head may not occur in
// the body.
struct EquationalFormula {
  std::string head;
  FormulaPtr body;
  EquationalFormula(std::string head_, FormulaPtr body_);
  FormulaPtr as_iff() const;
};

}  // namespace ctrfact
