#include "ctrfact/causal.hpp"

#include <algorithm>

namespace ctrfact {

const std::string kTopNode = "true";

EquationalState::EquationalState(std::map<std::string, FormulaPtr> equations_,
                                 std::set<std::string> valuation_)
    : equations(std::move(equations_)), valuation(std::move(valuation_)) {
  for (const auto& [head, body] : equations) {
    EquationalFormula eq(head, body);  // validates name, body, head not in body
    if (!eval_prop(eq.as_iff(), valuation))
      throw std::invalid_argument(
          "valuation is incompatible with the equation for '" + head + "'");
  }
}

EquationalState::EquationalState(const std::vector<EquationalFormula>& eqs,
                                 std::set<std::string> valuation_)
    : EquationalState(
          [&eqs] {
            std::map<std::string, FormulaPtr> m;
            for (const auto& eq : eqs) {
              if (m.count(eq.head))
                throw std::invalid_argument("duplicate equation for '" +
                                            eq.head + "'");
              m[eq.head] = eq.body;
            }
            return m;
          }(),
          std::move(valuation_)) {}

std::vector<FormulaPtr> EquationalState::base() const {
  std::vector<FormulaPtr> out;
  for (const auto& [head, body] : equations)
    out.push_back(iff(atom(head), body));
  return out;
}

std::pair<std::set<std::string>, std::set<std::string>> classify_variables(
    const EquationalState& s) {
  std::set<std::string> endo, exo;
  for (const auto& [head, body] : s.equations) endo.insert(head);
  for (const auto& [head, body] : s.equations)
    for (const auto& a : atoms_of(body))
      if (!endo.count(a)) exo.insert(a);
  return {endo, exo};
}

namespace {

bool mentions_constant(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind == Kind::Top || f->kind == Kind::Bot) return true;
  return mentions_constant(f->left) || mentions_constant(f->right);
}

}  // namespace

CausalGraph build_causal_graph(
    const std::map<std::string, FormulaPtr>& equations) {
  CausalGraph g;
  std::set<std::string> nodes;
  for (const auto& [head, body] : equations) {
    nodes.insert(head);
    for (const auto& a : atoms_of(body)) nodes.insert(a);
    if (mentions_constant(body)) nodes.insert(kTopNode);
  }
  g.nodes.assign(nodes.begin(), nodes.end());
  for (const auto& n : g.nodes) g.parents[n] = {};
  for (const auto& [head, body] : equations) {
    std::set<std::string> ps = atoms_of(body);
    if (mentions_constant(body)) ps.insert(kTopNode);
    g.parents[head] = std::move(ps);
  }
  return g;
}

CausalGraph build_causal_graph(const EquationalState& s) {
  return build_causal_graph(s.equations);
}

std::vector<std::string> topo_order(const CausalGraph& g) {
  std::map<std::string, int> missing;
  for (const auto& n : g.nodes)
    missing[n] = static_cast<int>(g.parents.at(n).size());
  std::vector<std::string> order;
  // Kahn's algorithm over the alphabetical node list, smallest ready node
  // first, so the order is deterministic.
  std::set<std::string> ready;
  for (const auto& [n, m] : missing)
    if (m == 0) ready.insert(n);
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& n : g.nodes)
    for (const auto& p : g.parents.at(n)) children[p].push_back(n);
  while (!ready.empty()) {
    std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& c : children[n])
      if (--missing[c] == 0) ready.insert(c);
  }
  if (order.size() != g.nodes.size())
    throw std::invalid_argument("topo_order: the causal graph has a cycle");
  return order;
}

bool is_dag(const CausalGraph& g) {
  try {
    topo_order(g);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

FormulaPtr intervention_conjunct(const Intervention& e) {
  Term t;
  for (const auto& [p, v] : e) t[p] = v;
  return term_formula(t);
}

std::map<std::string, FormulaPtr> intervene_base(
    const std::map<std::string, FormulaPtr>& equations, const Intervention& e) {
  std::map<std::string, FormulaPtr> out = equations;
  for (const auto& [p, v] : e) out[p] = v ? top() : bot();
  return out;
}

EquationalState solve_post_intervention(const EquationalState& s,
                                        const Intervention& e) {
  std::map<std::string, FormulaPtr> eqs = intervene_base(s.equations, e);
  CausalGraph g = build_causal_graph(eqs);
  std::vector<std::string> order = topo_order(g);  // throws on a cycle
  std::set<std::string> val;
  for (const auto& p : s.valuation)
    if (!eqs.count(p)) val.insert(p);
  for (const auto& p : order) {
    auto it = eqs.find(p);
    if (it == eqs.end()) continue;
    if (eval_prop(it->second, val))
      val.insert(p);
    else
      val.erase(p);
  }
  return EquationalState(std::move(eqs), std::move(val));
}

Term exo_term(const EquationalState& s) {
  auto [endo, exo] = classify_variables(s);
  Term t;
  for (const auto& p : exo) t[p] = s.valuation.count(p) != 0;
  return t;
}

namespace {

void require_cause_query(const EquationalState& s, const Term& lambda,
                         const FormulaPtr& omega, const char* who) {
  auto [endo, exo] = classify_variables(s);
  for (const auto& [a, sign] : lambda) {
    (void)sign;
    if (!endo.count(a))
      throw std::invalid_argument(std::string(who) + ": term atom '" + a +
                                  "' is not endogenous");
  }
  std::set<std::string> base_atoms;
  for (const auto& [head, body] : s.equations) {
    base_atoms.insert(head);
    for (const auto& a : atoms_of(body)) base_atoms.insert(a);
  }
  for (const auto& a : atoms_of(omega))
    if (!base_atoms.count(a))
      throw std::invalid_argument(std::string(who) + ": effect atom '" + a +
                                  "' does not occur in the base");
  if (!is_propositional(omega))
    throw std::invalid_argument(std::string(who) +
                                ": the effect must be propositional");
  if (!is_dag(build_causal_graph(s)))
    throw std::invalid_argument(std::string(who) +
                                ": the causal graph must be acyclic");
}

}  // namespace

bool but_condition(const EquationalState& s, const Term& lambda,
                   const FormulaPtr& omega) {
  require_cause_query(s, lambda, omega, "but_condition");
  auto [endo, exo] = classify_variables(s);
  std::vector<std::string> freezable;
  for (const auto& p : endo)
    if (!lambda.count(p)) freezable.push_back(p);
  std::set<std::string> lambda_atoms;
  for (const auto& [a, sign] : lambda) {
    (void)sign;
    lambda_atoms.insert(a);
  }
  // Every sign pattern on the term's atoms, merged with every freeze of
  // disjoint endogenous variables at their actual values; one successor
  // falsifying omega suffices.
  for (const Term& pattern : enumerate_terms(lambda_atoms)) {
    for (std::uint32_t z = 0; z < (std::uint32_t{1} << freezable.size()); ++z) {
      Intervention e(pattern.begin(), pattern.end());
      for (std::size_t k = 0; k < freezable.size(); ++k)
        if ((z >> k) & 1)
          e[freezable[k]] = s.valuation.count(freezable[k]) != 0;
      EquationalState after = solve_post_intervention(s, e);
      if (!eval_prop(omega, after.valuation)) return true;
    }
  }
  return false;
}

bool but_condition_via_might(const EquationalState& s, const Term& lambda,
                             const FormulaPtr& omega) {
  require_cause_query(s, lambda, omega, "but_condition_via_might");
  if (!term_holds(lambda, s.valuation))
    throw std::invalid_argument(
        "but_condition_via_might: the state does not satisfy the term");
  std::set<std::string> lambda_atoms;
  for (const auto& [a, sign] : lambda) {
    (void)sign;
    lambda_atoms.insert(a);
  }
  FormulaPtr exo_f = term_formula(exo_term(s));
  FormulaPtr disjunction;
  for (const Term& pattern : enumerate_terms(lambda_atoms)) {
    FormulaPtr d =
        diamond(conj(term_formula(pattern), exo_f), neg(omega));
    disjunction = disjunction ? disj(disjunction, d) : d;
  }
  return model_check(disjunction, s.base(), State(s.base(), s.valuation));
}

namespace {

std::vector<std::set<std::string>> strict_subsets(
    const std::set<std::string>& atoms) {
  std::vector<std::string> order(atoms.begin(), atoms.end());
  std::vector<std::set<std::string>> out;
  for (std::uint32_t m = 0; m + 1 < (std::uint32_t{1} << order.size()); ++m) {
    std::set<std::string> sub;
    for (std::size_t k = 0; k < order.size(); ++k)
      if ((m >> k) & 1) sub.insert(order[k]);
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace

bool is_actual_cause(const EquationalState& s, const Term& lambda,
                     const FormulaPtr& omega) {
  require_cause_query(s, lambda, omega, "is_actual_cause");
  if (!term_holds(lambda, s.valuation) || !eval_prop(omega, s.valuation))
    return false;
  if (!but_condition(s, lambda, omega)) return false;
  std::set<std::string> lambda_atoms;
  for (const auto& [a, sign] : lambda) {
    (void)sign;
    lambda_atoms.insert(a);
  }
  for (const auto& sub_atoms : strict_subsets(lambda_atoms)) {
    Term sub;
    for (const auto& a : sub_atoms) sub[a] = lambda.at(a);
    if (but_condition(s, sub, omega)) return false;
  }
  return true;
}

bool actual_cause_via_counterfactuals(const EquationalState& s,
                                      const Term& lambda,
                                      const FormulaPtr& omega) {
  require_cause_query(s, lambda, omega, "actual_cause_via_counterfactuals");
  if (lambda.empty())
    throw std::invalid_argument(
        "actual_cause_via_counterfactuals: the candidate term is empty");
  FormulaPtr exo_f = term_formula(exo_term(s));
  FormulaPtr f = term_formula(lambda);
  f = conj(f, diamond(conj(term_formula(negate_term(lambda)), exo_f),
                      neg(omega)));
  std::set<std::string> lambda_atoms;
  for (const auto& [a, sign] : lambda) {
    (void)sign;
    lambda_atoms.insert(a);
  }
  for (const auto& sub_atoms : strict_subsets(lambda_atoms))
    for (const Term& pattern : enumerate_terms(sub_atoms))
      f = conj(f, box(conj(term_formula(pattern), exo_f), omega));
  return model_check(f, s.base(), State(s.base(), s.valuation));
}

std::vector<Term> enumerate_actual_causes(const EquationalState& s,
                                          const FormulaPtr& omega,
                                          int max_size) {
  auto [endo, exo] = classify_variables(s);
  std::vector<std::string> order(endo.begin(), endo.end());
  std::vector<Term> out;
  int limit = std::min<int>(max_size, static_cast<int>(order.size()));
  for (int k = 1; k <= limit; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      Term lambda;
      for (int i : idx)
        lambda[order[i]] = s.valuation.count(order[i]) != 0;
      if (is_actual_cause(s, lambda, omega)) out.push_back(lambda);
      int i = k - 1;
      while (i >= 0 && idx[i] == static_cast<int>(order.size()) - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace ctrfact
