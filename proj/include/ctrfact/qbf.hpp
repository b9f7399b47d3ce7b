#pragma once

#include "ctrfact/causal.hpp"

namespace ctrfact {

enum class QKind { Var, Top, Bot, Not, And, Or, Implies, Iff, Forall, Exists };

struct Qbf;
using QbfPtr = std::shared_ptr<const Qbf>;

// Quantified boolean formulas, n-ary conjunction and disjunction; a
// quantifier binds var in kids[0].
struct Qbf {
  QKind kind;
  std::string var;        // Var name, or the bound variable of a quantifier
  std::vector<QbfPtr> kids;
};

QbfPtr qvar(const std::string& name);
QbfPtr qtop();
QbfPtr qbot();
QbfPtr qnot(QbfPtr f);
QbfPtr qand(std::vector<QbfPtr> kids);  // the empty conjunction is top
QbfPtr qor(std::vector<QbfPtr> kids);   // the empty disjunction is bot
QbfPtr qimplies(QbfPtr a, QbfPtr b);
QbfPtr qiff(QbfPtr a, QbfPtr b);
QbfPtr qforall(const std::string& v, QbfPtr body);
QbfPtr qexists(const std::string& v, QbfPtr body);

std::set<std::string> qbf_free_vars(const QbfPtr& f);
std::size_t qbf_size(const QbfPtr& f);  // node count

// Evaluate under an assignment of the free variables (all of them must be
// covered; a closed formula needs none). Exact two-branch recursion over
// quantifiers, pruned by a three-valued probe of each quantifier body, so
// forced-chain encodings evaluate far below the worst case; unstructured
// formulas stay exponential and are practical to roughly 25 quantified
// variables.
bool eval_qbf(const QbfPtr& f, const std::map<std::string, bool>& assignment = {});

// The predicate kit behind the checking encodings, exposed for the
// encoding-soundness tests. Families of state bits are indexed by i: bit
// names are xv_i_p for p in sigma and xb_i_g for the g-th gamma member;
// family order is all xv bits (sigma sorted) then all xb bits.
class McPredicates {
 public:
  McPredicates(std::vector<FormulaPtr> gamma, std::set<std::string> sigma,
               FormulaPtr constraint = nullptr);

  const std::vector<FormulaPtr>& gamma() const { return gamma_; }
  const std::vector<std::string>& sigma() const { return sigma_; }

  std::string xv(int i, const std::string& p) const;
  std::string xb(int i, int g) const;
  std::vector<std::string> family(int i) const;

  // Pin family i to a concrete state (base members resolved structurally
  // against gamma).
  QbfPtr init(const State& s, int i) const;
  // Family i is a state: every flagged base member holds under the family's
  // valuation bits, and the valuation satisfies the constraint.
  QbfPtr state_pred(int i) const;
  QbfPtr eq(int j, int k) const;
  // Family k is at least as close to anchor family i as family j.
  QbfPtr closereq(int i, int j, int k) const;
  QbfPtr closer(int i, int j, int k) const;
  // Truth of a (possibly counterfactual) formula at family i; conditionals
  // quantify fresh families and a fresh marker variable r_n.
  QbfPtr sat(const FormulaPtr& f, int i);
  // Family j is one of the closest phi-states seen from family i.
  QbfPtr closest(const FormulaPtr& phi, int i, int j);

  // The family-i bits of a packed state, for evaluating open predicates.
  std::map<std::string, bool> assignment_for(const State& s, int i) const;

 private:
  QbfPtr sat_prop(const FormulaPtr& f, int i) const;
  int fresh_r();

  std::vector<FormulaPtr> gamma_;
  std::vector<std::string> sigma_;
  FormulaPtr chi_;
  int r_counter_ = 0;

  friend class CausePredicates;
};

// The term predicates of the actual-cause encoding, over the same state
// families plus literal families lp_i_p / ln_i_p (interleaved per atom in
// sigma order).
class CausePredicates {
 public:
  explicit CausePredicates(const EquationalState& s);

  McPredicates& mc() { return mc_; }
  std::string lp(int i, const std::string& p) const;
  std::string ln(int i, const std::string& p) const;
  std::vector<std::string> term_family(int i) const;

  QbfPtr term_init(const Term& t, int i) const;
  QbfPtr term_pred(int i) const;          // no atom both positive and negative
  QbfPtr inv_term(int i, int j) const;    // j is i literal-wise negated
  QbfPtr merge_terms(int i, int j, int k) const;  // k is exactly the union
  QbfPtr term_vars_subset(int i, int j) const;
  QbfPtr term_vars_strict(int i, int j) const;
  QbfPtr term_exo(int i, int xj) const;   // i pins exactly the exogenous part
  QbfPtr term_sat(int i, int xj) const;
  QbfPtr term_closest(int t, int xi, int xj);
  QbfPtr term_ctrfact(int t, const FormulaPtr& omega, int xi);
  QbfPtr actual_cause(int t, const FormulaPtr& omega, int xi);

  std::map<std::string, bool> term_assignment_for(const Term& t, int i) const;

 private:
  QbfPtr quantify_term_family(QKind q, int i, QbfPtr body) const;

  McPredicates mc_;
  std::set<std::string> exo_;
};

// The checking problem as a closed QBF: an existential state family pinned
// to the state, conjoined with the satisfaction encoding of psi. sigma is
// the atoms of gamma, psi, and the constraint, plus sigma_extra.
QbfPtr encode_mc(const FormulaPtr& psi, const std::vector<FormulaPtr>& gamma,
                 const State& state, const FormulaPtr& constraint = nullptr,
                 const std::set<std::string>& sigma_extra = {});

// The reduction from closed QBF evaluation to checking at the empty state
// under an empty gamma: universals become counterfactuals whose antecedent
// frees the variable via a renamed copy.
FormulaPtr encode_hardness(const QbfPtr& tau);

// The actual-cause decision as a closed QBF over gamma = base(S) and
// sigma = the base's atoms.
QbfPtr encode_actual_cause(const Term& lambda, const FormulaPtr& omega,
                           const EquationalState& s);

// Non-prenex QCIR-G14; quantifiers become quantifier gates, consecutive
// same-kind quantifiers merge into one gate.
std::string export_qcir(const QbfPtr& f);
QbfPtr parse_qcir(const std::string& text);

// Prenex QDIMACS via negation normal form, renaming apart, left-to-right
// prefix collection, and full biconditional Tseitin of the matrix (the gate
// variables join the innermost existential block).
std::string export_qdimacs(const QbfPtr& f);
QbfPtr parse_qdimacs(const std::string& text);

}  // namespace ctrfact
