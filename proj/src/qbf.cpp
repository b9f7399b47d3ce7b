#include "ctrfact/qbf.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <sstream>

namespace ctrfact {

namespace {

QbfPtr qmake(QKind k, std::string var, std::vector<QbfPtr> kids) {
  auto n = std::make_shared<Qbf>();
  n->kind = k;
  n->var = std::move(var);
  n->kids = std::move(kids);
  return n;
}

}  // namespace

QbfPtr qvar(const std::string& name) {
  if (name.empty())
    throw std::invalid_argument("qvar: empty variable name");
  return qmake(QKind::Var, name, {});
}

QbfPtr qtop() { return qmake(QKind::Top, "", {}); }

QbfPtr qbot() { return qmake(QKind::Bot, "", {}); }

QbfPtr qnot(QbfPtr f) { return qmake(QKind::Not, "", {std::move(f)}); }

QbfPtr qand(std::vector<QbfPtr> kids) {
  if (kids.empty()) return qtop();
  if (kids.size() == 1) return kids[0];
  return qmake(QKind::And, "", std::move(kids));
}

QbfPtr qor(std::vector<QbfPtr> kids) {
  if (kids.empty()) return qbot();
  if (kids.size() == 1) return kids[0];
  return qmake(QKind::Or, "", std::move(kids));
}

QbfPtr qimplies(QbfPtr a, QbfPtr b) {
  return qmake(QKind::Implies, "", {std::move(a), std::move(b)});
}

QbfPtr qiff(QbfPtr a, QbfPtr b) {
  return qmake(QKind::Iff, "", {std::move(a), std::move(b)});
}

QbfPtr qforall(const std::string& v, QbfPtr body) {
  return qmake(QKind::Forall, v, {std::move(body)});
}

QbfPtr qexists(const std::string& v, QbfPtr body) {
  return qmake(QKind::Exists, v, {std::move(body)});
}

namespace {

void free_vars_walk(const QbfPtr& f, std::set<std::string>& bound,
                    std::set<std::string>& out) {
  switch (f->kind) {
    case QKind::Var:
      if (!bound.count(f->var)) out.insert(f->var);
      return;
    case QKind::Forall:
    case QKind::Exists: {
      bool was = bound.count(f->var) != 0;
      bound.insert(f->var);
      free_vars_walk(f->kids[0], bound, out);
      if (!was) bound.erase(f->var);
      return;
    }
    default:
      for (const auto& k : f->kids) free_vars_walk(k, bound, out);
  }
}

}  // namespace

std::set<std::string> qbf_free_vars(const QbfPtr& f) {
  std::set<std::string> bound, out;
  free_vars_walk(f, bound, out);
  return out;
}

std::size_t qbf_size(const QbfPtr& f) {
  std::size_t n = 1;
  for (const auto& k : f->kids) n += qbf_size(k);
  return n;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct CNode {
  QKind kind;
  int var = -1;          // Var: its id; quantifier: the bound id
  bool var_used = true;  // quantifier: whether the body mentions the id
  std::vector<const CNode*> kids;
};

struct QbfEval {
  std::deque<CNode> arena;
  std::vector<signed char> env;  // 0 false, 1 true, 2 unknown
  std::vector<char> used;
  std::map<std::string, std::vector<int>> scope;
  const std::map<std::string, bool>* assignment = nullptr;

  const CNode* mk(QKind k) {
    arena.push_back(CNode{k, -1, true, {}});
    return &arena.back();
  }

  const CNode* compile(const QbfPtr& f) {
    switch (f->kind) {
      case QKind::Var: {
        auto it = scope.find(f->var);
        if (it != scope.end() && !it->second.empty()) {
          CNode n{QKind::Var, it->second.back(), true, {}};
          used[n.var] = 1;
          arena.push_back(n);
          return &arena.back();
        }
        auto a = assignment->find(f->var);
        if (a == assignment->end())
          throw std::invalid_argument("eval_qbf: free variable '" + f->var +
                                      "' has no assigned value");
        return mk(a->second ? QKind::Top : QKind::Bot);
      }
      case QKind::Top:
      case QKind::Bot:
        return mk(f->kind);
      case QKind::Forall:
      case QKind::Exists: {
        int id = static_cast<int>(env.size());
        env.push_back(2);
        used.push_back(0);
        scope[f->var].push_back(id);
        const CNode* body = compile(f->kids[0]);
        scope[f->var].pop_back();
        CNode n{f->kind, id, used[id] != 0, {body}};
        arena.push_back(n);
        return &arena.back();
      }
      default: {
        CNode n{f->kind, -1, true, {}};
        for (const auto& k : f->kids) n.kids.push_back(compile(k));
        arena.push_back(std::move(n));
        return &arena.back();
      }
    }
  }

  // Three-valued pass with every unbound quantifier variable unknown; a
  // definite verdict holds for both branch values, so the caller may prune.
  int probe(const CNode* n) {
    switch (n->kind) {
      case QKind::Var:
        return env[n->var];
      case QKind::Top:
        return 1;
      case QKind::Bot:
        return 0;
      case QKind::Not: {
        int v = probe(n->kids[0]);
        return v == 2 ? 2 : 1 - v;
      }
      case QKind::And: {
        bool unknown = false;
        for (const CNode* k : n->kids) {
          int v = probe(k);
          if (v == 0) return 0;
          if (v == 2) unknown = true;
        }
        return unknown ? 2 : 1;
      }
      case QKind::Or: {
        bool unknown = false;
        for (const CNode* k : n->kids) {
          int v = probe(k);
          if (v == 1) return 1;
          if (v == 2) unknown = true;
        }
        return unknown ? 2 : 0;
      }
      case QKind::Implies: {
        int a = probe(n->kids[0]);
        if (a == 0) return 1;
        int b = probe(n->kids[1]);
        if (b == 1) return 1;
        if (a == 1 && b == 0) return 0;
        return 2;
      }
      case QKind::Iff: {
        int a = probe(n->kids[0]);
        if (a == 2) return 2;
        int b = probe(n->kids[1]);
        if (b == 2) return 2;
        return a == b ? 1 : 0;
      }
      case QKind::Forall:
      case QKind::Exists: {
        signed char old = env[n->var];
        env[n->var] = 2;
        int v = probe(n->kids[0]);
        env[n->var] = old;
        return v;
      }
    }
    return 2;
  }

  bool eval(const CNode* n) {
    switch (n->kind) {
      case QKind::Var:
        return env[n->var] == 1;
      case QKind::Top:
        return true;
      case QKind::Bot:
        return false;
      case QKind::Not:
        return !eval(n->kids[0]);
      case QKind::And:
        for (const CNode* k : n->kids)
          if (!eval(k)) return false;
        return true;
      case QKind::Or:
        for (const CNode* k : n->kids)
          if (eval(k)) return true;
        return false;
      case QKind::Implies:
        return !eval(n->kids[0]) || eval(n->kids[1]);
      case QKind::Iff:
        return eval(n->kids[0]) == eval(n->kids[1]);
      case QKind::Forall: {
        if (!n->var_used) return eval(n->kids[0]);
        signed char old = env[n->var];
        env[n->var] = 2;
        int p = probe(n->kids[0]);
        if (p != 2) {
          env[n->var] = old;
          return p == 1;
        }
        env[n->var] = 0;
        bool r = eval(n->kids[0]);
        if (r) {
          env[n->var] = 1;
          r = eval(n->kids[0]);
        }
        env[n->var] = old;
        return r;
      }
      case QKind::Exists: {
        if (!n->var_used) return eval(n->kids[0]);
        signed char old = env[n->var];
        env[n->var] = 2;
        int p = probe(n->kids[0]);
        if (p != 2) {
          env[n->var] = old;
          return p == 1;
        }
        env[n->var] = 0;
        bool r = eval(n->kids[0]);
        if (!r) {
          env[n->var] = 1;
          r = eval(n->kids[0]);
        }
        env[n->var] = old;
        return r;
      }
    }
    return false;
  }
};

}  // namespace

bool eval_qbf(const QbfPtr& f, const std::map<std::string, bool>& assignment) {
  QbfEval e;
  e.assignment = &assignment;
  const CNode* root = e.compile(f);
  return e.eval(root);
}

// ---------------------------------------------------------------------------
// Checking encodings

McPredicates::McPredicates(std::vector<FormulaPtr> gamma,
                           std::set<std::string> sigma, FormulaPtr constraint)
    : sigma_(sigma.begin(), sigma.end()),
      chi_(constraint ? std::move(constraint) : top()) {
  for (auto& f : gamma) {
    bool seen = false;
    for (const auto& g : gamma_)
      if (equal(f, g)) {
        seen = true;
        break;
      }
    if (!seen) gamma_.push_back(std::move(f));
  }
  std::set<std::string> needed;
  for (const auto& g : gamma_)
    for (const auto& a : atoms_of(g)) needed.insert(a);
  for (const auto& a : atoms_of(chi_)) needed.insert(a);
  for (const auto& a : needed)
    if (!sigma.count(a))
      throw std::invalid_argument("McPredicates: sigma is missing atom '" + a +
                                  "'");
}

std::string McPredicates::xv(int i, const std::string& p) const {
  return "xv_" + std::to_string(i) + "_" + p;
}

std::string McPredicates::xb(int i, int g) const {
  return "xb_" + std::to_string(i) + "_" + std::to_string(g);
}

std::vector<std::string> McPredicates::family(int i) const {
  std::vector<std::string> out;
  for (const auto& p : sigma_) out.push_back(xv(i, p));
  for (std::size_t g = 0; g < gamma_.size(); ++g)
    out.push_back(xb(i, static_cast<int>(g)));
  return out;
}

QbfPtr McPredicates::init(const State& s, int i) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : sigma_) {
    QbfPtr v = qvar(xv(i, p));
    cs.push_back(s.valuation.count(p) ? v : qnot(v));
  }
  std::vector<char> flagged(gamma_.size(), 0);
  for (const auto& f : s.base) {
    bool found = false;
    for (std::size_t g = 0; g < gamma_.size(); ++g)
      if (equal(f, gamma_[g])) {
        flagged[g] = 1;
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument(
          "init: state base formula is not a member of gamma: " +
          render_formula(f));
  }
  for (std::size_t g = 0; g < gamma_.size(); ++g) {
    QbfPtr v = qvar(xb(i, static_cast<int>(g)));
    cs.push_back(flagged[g] ? v : qnot(v));
  }
  return qand(std::move(cs));
}

QbfPtr McPredicates::state_pred(int i) const {
  std::vector<QbfPtr> cs;
  for (std::size_t g = 0; g < gamma_.size(); ++g)
    cs.push_back(qimplies(qvar(xb(i, static_cast<int>(g))),
                          sat_prop(gamma_[g], i)));
  if (chi_->kind != Kind::Top) cs.push_back(sat_prop(chi_, i));
  return qand(std::move(cs));
}

QbfPtr McPredicates::eq(int j, int k) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : sigma_)
    cs.push_back(qiff(qvar(xv(j, p)), qvar(xv(k, p))));
  for (std::size_t g = 0; g < gamma_.size(); ++g)
    cs.push_back(qiff(qvar(xb(j, static_cast<int>(g))),
                      qvar(xb(k, static_cast<int>(g)))));
  return qand(std::move(cs));
}

QbfPtr McPredicates::closereq(int i, int j, int k) const {
  std::vector<QbfPtr> cs;
  // Base clause: whatever the anchor shares with j it also shares with k.
  for (std::size_t g = 0; g < gamma_.size(); ++g) {
    int gi = static_cast<int>(g);
    cs.push_back(qimplies(qand({qvar(xb(i, gi)), qvar(xb(j, gi))}),
                          qvar(xb(k, gi))));
  }
  // Valuation clause: k diverges from the anchor only where j does.
  for (const auto& p : sigma_) {
    cs.push_back(qimplies(qand({qvar(xv(i, p)), qnot(qvar(xv(k, p)))}),
                          qnot(qvar(xv(j, p)))));
    cs.push_back(qimplies(qand({qnot(qvar(xv(i, p))), qvar(xv(k, p))}),
                          qvar(xv(j, p))));
  }
  return qand(std::move(cs));
}

QbfPtr McPredicates::closer(int i, int j, int k) const {
  return qand({closereq(i, j, k), qnot(closereq(i, k, j))});
}

QbfPtr McPredicates::sat_prop(const FormulaPtr& f, int i) const {
  switch (f->kind) {
    case Kind::Atom: {
      for (const auto& p : sigma_)
        if (p == f->name) return qvar(xv(i, p));
      return qbot();
    }
    case Kind::Top:
      return qtop();
    case Kind::Bot:
      return qbot();
    case Kind::Not:
      return qnot(sat_prop(f->left, i));
    case Kind::And:
      return qand({sat_prop(f->left, i), sat_prop(f->right, i)});
    case Kind::Or:
      return qor({sat_prop(f->left, i), sat_prop(f->right, i)});
    case Kind::Implies:
      return qimplies(sat_prop(f->left, i), sat_prop(f->right, i));
    case Kind::Iff:
      return qiff(sat_prop(f->left, i), sat_prop(f->right, i));
    default:
      throw std::invalid_argument("sat_prop: not propositional");
  }
}

int McPredicates::fresh_r() { return r_counter_++; }

namespace {

QbfPtr quantify(QKind q, const std::vector<std::string>& vars, QbfPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    body = q == QKind::Forall ? qforall(*it, std::move(body))
                              : qexists(*it, std::move(body));
  return body;
}

}  // namespace

QbfPtr McPredicates::closest(const FormulaPtr& phi, int i, int j) {
  int k = std::max(i, j) + 1;
  std::string r = "r_" + std::to_string(fresh_r());
  QbfPtr body = qimplies(
      state_pred(k),
      qimplies(qiff(sat(phi, k), qvar(r)),
               qand({qimplies(eq(j, k), qvar(r)),
                     qimplies(closer(i, j, k), qnot(qvar(r)))})));
  return quantify(QKind::Forall, family(k), qforall(r, std::move(body)));
}

QbfPtr McPredicates::sat(const FormulaPtr& f, int i) {
  switch (f->kind) {
    case Kind::Delta: {
      for (std::size_t g = 0; g < gamma_.size(); ++g)
        if (equal(f->left, gamma_[g])) return qvar(xb(i, static_cast<int>(g)));
      return qbot();
    }
    case Kind::Not:
      return qnot(sat(f->left, i));
    case Kind::And:
      return qand({sat(f->left, i), sat(f->right, i)});
    case Kind::Or:
      return qor({sat(f->left, i), sat(f->right, i)});
    case Kind::Implies:
      return qimplies(sat(f->left, i), sat(f->right, i));
    case Kind::Iff:
      return qiff(sat(f->left, i), sat(f->right, i));
    case Kind::BoxRight: {
      int k = i + 1;
      QbfPtr body = qimplies(
          state_pred(k),
          qimplies(closest(f->left, i, k), sat(f->right, k)));
      return quantify(QKind::Forall, family(k), std::move(body));
    }
    case Kind::DiamondRight:
      // phi <>-> psi is ~(phi []-> ~psi), encoded definitionally.
      return qnot(sat(box(f->left, neg(f->right)), i));
    default:
      return sat_prop(f, i);
  }
}

std::map<std::string, bool> McPredicates::assignment_for(const State& s,
                                                         int i) const {
  std::map<std::string, bool> out;
  for (const auto& p : sigma_) out[xv(i, p)] = s.valuation.count(p) != 0;
  for (std::size_t g = 0; g < gamma_.size(); ++g) {
    bool in = false;
    for (const auto& f : s.base)
      if (equal(f, gamma_[g])) {
        in = true;
        break;
      }
    out[xb(i, static_cast<int>(g))] = in;
  }
  return out;
}

QbfPtr encode_mc(const FormulaPtr& psi, const std::vector<FormulaPtr>& gamma,
                 const State& state, const FormulaPtr& constraint,
                 const std::set<std::string>& sigma_extra) {
  FormulaPtr chi = constraint ? constraint : top();
  std::set<std::string> sigma = sigma_extra;
  for (const auto& g : gamma)
    for (const auto& a : atoms_of(g)) sigma.insert(a);
  for (const auto& a : atoms_of(psi)) sigma.insert(a);
  for (const auto& a : atoms_of(chi)) sigma.insert(a);
  std::set<std::string> val;
  for (const auto& p : state.valuation)
    if (sigma.count(p)) val.insert(p);
  State restricted(state.base, std::move(val));
  McPredicates enc(gamma, sigma, chi);
  QbfPtr body = qand({enc.init(restricted, 0), enc.sat(psi, 0)});
  return quantify(QKind::Exists, enc.family(0), std::move(body));
}

// ---------------------------------------------------------------------------
// Actual-cause encoding

CausePredicates::CausePredicates(const EquationalState& s)
    : mc_(s.base(),
          [&s] {
            std::set<std::string> atoms;
            for (const auto& [head, bd] : s.equations) {
              atoms.insert(head);
              for (const auto& a : atoms_of(bd)) atoms.insert(a);
            }
            return atoms;
          }(),
          nullptr) {
  auto [endo, exo] = classify_variables(s);
  exo_ = std::move(exo);
}

std::string CausePredicates::lp(int i, const std::string& p) const {
  return "lp_" + std::to_string(i) + "_" + p;
}

std::string CausePredicates::ln(int i, const std::string& p) const {
  return "ln_" + std::to_string(i) + "_" + p;
}

std::vector<std::string> CausePredicates::term_family(int i) const {
  std::vector<std::string> out;
  for (const auto& p : mc_.sigma()) {
    out.push_back(lp(i, p));
    out.push_back(ln(i, p));
  }
  return out;
}

QbfPtr CausePredicates::term_init(const Term& t, int i) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma()) {
    auto it = t.find(p);
    bool pos = it != t.end() && it->second;
    bool negl = it != t.end() && !it->second;
    cs.push_back(pos ? qvar(lp(i, p)) : qnot(qvar(lp(i, p))));
    cs.push_back(negl ? qvar(ln(i, p)) : qnot(qvar(ln(i, p))));
  }
  return qand(std::move(cs));
}

QbfPtr CausePredicates::term_pred(int i) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma())
    cs.push_back(qnot(qand({qvar(lp(i, p)), qvar(ln(i, p))})));
  return qand(std::move(cs));
}

QbfPtr CausePredicates::inv_term(int i, int j) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma()) {
    cs.push_back(qiff(qvar(lp(i, p)), qvar(ln(j, p))));
    cs.push_back(qiff(qvar(ln(i, p)), qvar(lp(j, p))));
  }
  return qand(std::move(cs));
}

QbfPtr CausePredicates::merge_terms(int i, int j, int k) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma()) {
    cs.push_back(
        qiff(qvar(lp(k, p)), qor({qvar(lp(i, p)), qvar(lp(j, p))})));
    cs.push_back(
        qiff(qvar(ln(k, p)), qor({qvar(ln(i, p)), qvar(ln(j, p))})));
  }
  return qand(std::move(cs));
}

QbfPtr CausePredicates::term_vars_subset(int i, int j) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma())
    cs.push_back(qimplies(qor({qvar(lp(i, p)), qvar(ln(i, p))}),
                          qor({qvar(lp(j, p)), qvar(ln(j, p))})));
  return qand(std::move(cs));
}

QbfPtr CausePredicates::term_vars_strict(int i, int j) const {
  return qand({term_vars_subset(i, j), qnot(term_vars_subset(j, i))});
}

QbfPtr CausePredicates::term_exo(int i, int xj) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma()) {
    if (exo_.count(p)) {
      cs.push_back(qiff(qvar(lp(i, p)), qvar(mc_.xv(xj, p))));
      cs.push_back(qiff(qvar(ln(i, p)), qnot(qvar(mc_.xv(xj, p)))));
    } else {
      cs.push_back(qnot(qvar(lp(i, p))));
      cs.push_back(qnot(qvar(ln(i, p))));
    }
  }
  return qand(std::move(cs));
}

QbfPtr CausePredicates::term_sat(int i, int xj) const {
  std::vector<QbfPtr> cs;
  for (const auto& p : mc_.sigma()) {
    cs.push_back(qimplies(qvar(lp(i, p)), qvar(mc_.xv(xj, p))));
    cs.push_back(qimplies(qvar(ln(i, p)), qnot(qvar(mc_.xv(xj, p)))));
  }
  return qand(std::move(cs));
}

QbfPtr CausePredicates::term_closest(int t, int xi, int xj) {
  int k = std::max(t, std::max(xi, xj)) + 1;
  std::string r = "r_" + std::to_string(mc_.fresh_r());
  QbfPtr body = qimplies(
      mc_.state_pred(k),
      qimplies(qiff(term_sat(t, k), qvar(r)),
               qand({qimplies(mc_.eq(xj, k), qvar(r)),
                     qimplies(mc_.closer(xi, xj, k), qnot(qvar(r)))})));
  return quantify(QKind::Forall, mc_.family(k), qforall(r, std::move(body)));
}

QbfPtr CausePredicates::term_ctrfact(int t, const FormulaPtr& omega, int xi) {
  int n = std::max(t, xi) + 1;
  QbfPtr body = qimplies(
      mc_.state_pred(n),
      qimplies(term_closest(t, xi, n), mc_.sat(omega, n)));
  return quantify(QKind::Forall, mc_.family(n), std::move(body));
}

QbfPtr CausePredicates::quantify_term_family(QKind q, int i, QbfPtr body) const {
  return quantify(q, term_family(i), std::move(body));
}

QbfPtr CausePredicates::actual_cause(int t, const FormulaPtr& omega, int xi) {
  int n = std::max(t, xi) + 1;
  // Existential block: flipping the whole term, padded with the exogenous
  // part, might falsify the effect.
  QbfPtr pos = qand({inv_term(n, t), term_exo(n + 1, xi),
                     merge_terms(n, n + 1, n + 2),
                     qnot(term_ctrfact(n + 2, omega, xi))});
  pos = quantify_term_family(QKind::Exists, n,
        quantify_term_family(QKind::Exists, n + 1,
        quantify_term_family(QKind::Exists, n + 2, std::move(pos))));
  // Universal block: no strict-subterm sign pattern does.
  QbfPtr minimal = qimplies(
      term_pred(n),
      qimplies(term_vars_strict(n, t),
               qimplies(term_exo(n + 1, xi),
                        qimplies(merge_terms(n, n + 1, n + 2),
                                 term_ctrfact(n + 2, omega, xi)))));
  minimal = quantify_term_family(QKind::Forall, n,
            quantify_term_family(QKind::Forall, n + 1,
            quantify_term_family(QKind::Forall, n + 2, std::move(minimal))));
  return qand({term_sat(t, xi), std::move(pos), std::move(minimal)});
}

std::map<std::string, bool> CausePredicates::term_assignment_for(
    const Term& t, int i) const {
  std::map<std::string, bool> out;
  for (const auto& p : mc_.sigma()) {
    auto it = t.find(p);
    out[lp(i, p)] = it != t.end() && it->second;
    out[ln(i, p)] = it != t.end() && !it->second;
  }
  return out;
}

QbfPtr encode_actual_cause(const Term& lambda, const FormulaPtr& omega,
                           const EquationalState& s) {
  if (lambda.empty())
    throw std::invalid_argument(
        "encode_actual_cause: the candidate term is empty");
  auto [endo, exo] = classify_variables(s);
  for (const auto& [a, sign] : lambda) {
    (void)sign;
    if (!endo.count(a))
      throw std::invalid_argument("encode_actual_cause: term atom '" + a +
                                  "' is not endogenous");
  }
  if (!is_dag(build_causal_graph(s)))
    throw std::invalid_argument(
        "encode_actual_cause: the causal graph must be acyclic");
  CausePredicates cp(s);
  std::set<std::string> sigma(cp.mc().sigma().begin(), cp.mc().sigma().end());
  for (const auto& a : atoms_of(omega))
    if (!sigma.count(a))
      throw std::invalid_argument("encode_actual_cause: effect atom '" + a +
                                  "' does not occur in the base");
  std::set<std::string> val;
  for (const auto& p : s.valuation)
    if (sigma.count(p)) val.insert(p);
  State pinned(s.base(), std::move(val));
  QbfPtr body = qand({cp.mc().init(pinned, 0), cp.term_init(lambda, 0),
                      cp.actual_cause(0, omega, 0)});
  body = quantify(QKind::Exists, cp.term_family(0), std::move(body));
  return quantify(QKind::Exists, cp.mc().family(0), std::move(body));
}

// ---------------------------------------------------------------------------
// Hardness reduction

namespace {

// Reduce to the core connectives Var, Top, Bot, Not, And, Forall.
QbfPtr to_core(const QbfPtr& f) {
  switch (f->kind) {
    case QKind::Var:
    case QKind::Top:
    case QKind::Bot:
      return f;
    case QKind::Not:
      return qnot(to_core(f->kids[0]));
    case QKind::And: {
      std::vector<QbfPtr> ks;
      for (const auto& k : f->kids) ks.push_back(to_core(k));
      return qand(std::move(ks));
    }
    case QKind::Or: {
      std::vector<QbfPtr> ks;
      for (const auto& k : f->kids) ks.push_back(qnot(to_core(k)));
      return qnot(qand(std::move(ks)));
    }
    case QKind::Implies:
      return qnot(qand({to_core(f->kids[0]), qnot(to_core(f->kids[1]))}));
    case QKind::Iff: {
      QbfPtr a = to_core(f->kids[0]);
      QbfPtr b = to_core(f->kids[1]);
      return qand({qnot(qand({a, qnot(b)})), qnot(qand({b, qnot(a)}))});
    }
    case QKind::Forall:
      return qforall(f->var, to_core(f->kids[0]));
    case QKind::Exists:
      return qnot(qforall(f->var, qnot(to_core(f->kids[0]))));
  }
  return f;
}

void collect_names(const QbfPtr& f, std::set<std::string>& out) {
  if (f->kind == QKind::Var) out.insert(f->var);
  if (f->kind == QKind::Forall || f->kind == QKind::Exists) out.insert(f->var);
  for (const auto& k : f->kids) collect_names(k, out);
}

QbfPtr rename_apart(const QbfPtr& f,
                    std::map<std::string, std::vector<std::string>>& scope,
                    std::set<std::string>& used) {
  switch (f->kind) {
    case QKind::Var: {
      auto it = scope.find(f->var);
      if (it != scope.end() && !it->second.empty())
        return qvar(it->second.back());
      return f;
    }
    case QKind::Forall:
    case QKind::Exists: {
      std::string name = f->var;
      if (used.count(name)) {
        int n = 0;
        do {
          name = f->var + "_" + std::to_string(n++);
        } while (used.count(name));
      }
      used.insert(name);
      scope[f->var].push_back(name);
      QbfPtr body = rename_apart(f->kids[0], scope, used);
      scope[f->var].pop_back();
      return f->kind == QKind::Forall ? qforall(name, std::move(body))
                                      : qexists(name, std::move(body));
    }
    default: {
      std::vector<QbfPtr> ks;
      for (const auto& k : f->kids) ks.push_back(rename_apart(k, scope, used));
      auto n = std::make_shared<Qbf>();
      n->kind = f->kind;
      n->var = f->var;
      n->kids = std::move(ks);
      return n;
    }
  }
}

}  // namespace

namespace {

// Collapse structurally equal subtrees into shared nodes. Desugaring `iff`
// duplicates operands, and the checker memoizes satisfaction per node
// pointer, so without this pass duplicated counterfactual subtrees would be
// re-evaluated once per copy.
FormulaPtr hashcons_formula(const FormulaPtr& root) {
  std::map<std::string, std::pair<FormulaPtr, long long>> pool;
  std::unordered_map<const Formula*, std::pair<FormulaPtr, long long>> done;
  long long next_id = 0;
  std::function<std::pair<FormulaPtr, long long>(const FormulaPtr&)> go =
      [&](const FormulaPtr& n) -> std::pair<FormulaPtr, long long> {
    auto hit = done.find(n.get());
    if (hit != done.end()) return hit->second;
    std::string key = std::to_string(static_cast<int>(n->kind));
    FormulaPtr l, r;
    if (n->left) {
      auto [cl, il] = go(n->left);
      l = cl;
      key += "(" + std::to_string(il);
    }
    if (n->right) {
      auto [cr, ir] = go(n->right);
      r = cr;
      key += "," + std::to_string(ir);
    }
    if (n->left) key += ")";
    if (n->kind == Kind::Atom) key += "|" + n->name;
    auto it = pool.find(key);
    if (it == pool.end()) {
      FormulaPtr canon =
          (l == n->left && r == n->right)
              ? n
              : std::make_shared<const Formula>(Formula{n->kind, n->name, l, r,
                                                        n->hash});
      it = pool.emplace(key, std::make_pair(canon, next_id++)).first;
    }
    done.emplace(n.get(), it->second);
    return it->second;
  };
  return go(root).first;
}

}  // namespace

FormulaPtr encode_hardness(const QbfPtr& tau) {
  if (!qbf_free_vars(tau).empty())
    throw std::invalid_argument("encode_hardness: the formula must be closed");
  QbfPtr core = to_core(tau);
  std::map<std::string, std::vector<std::string>> scope;
  std::set<std::string> taken = qbf_free_vars(core);
  core = rename_apart(core, scope, taken);
  std::set<std::string> names;
  collect_names(core, names);
  std::set<std::string> bound;
  std::function<void(const QbfPtr&)> collect_bound = [&](const QbfPtr& n) {
    if (n->kind == QKind::Forall || n->kind == QKind::Exists)
      bound.insert(n->var);
    for (const auto& k : n->kids) collect_bound(k);
  };
  collect_bound(core);
  std::string suffix = "_xi";
  for (int c = 0;; ++c) {
    bool ok = true;
    for (const auto& v : bound)
      if (names.count(v + suffix)) {
        ok = false;
        break;
      }
    if (ok) break;
    suffix = "_xi" + std::to_string(c);
  }
  std::function<FormulaPtr(const QbfPtr&)> tr = [&](const QbfPtr& n) -> FormulaPtr {
    switch (n->kind) {
      case QKind::Var:
        return atom(n->var);
      case QKind::Top:
        return top();
      case QKind::Bot:
        return bot();
      case QKind::Not:
        return neg(tr(n->kids[0]));
      case QKind::And: {
        FormulaPtr f;
        for (const auto& k : n->kids) {
          FormulaPtr kf = tr(k);
          f = f ? conj(f, kf) : kf;
        }
        return f ? f : top();
      }
      case QKind::Forall:
        // A universal becomes a would-counterfactual whose antecedent frees
        // the variable through its renamed copy.
        return box(disj(atom(n->var), atom(n->var + suffix)), tr(n->kids[0]));
      default:
        throw std::logic_error("encode_hardness: non-core connective");
    }
  };
  return hashcons_formula(tr(core));
}

// ---------------------------------------------------------------------------
// QCIR export and import

namespace {

// Implies and Iff rewritten into and/or/not; everything else kept.
QbfPtr desugar_bool(const QbfPtr& f) {
  switch (f->kind) {
    case QKind::Var:
    case QKind::Top:
    case QKind::Bot:
      return f;
    case QKind::Not:
      return qnot(desugar_bool(f->kids[0]));
    case QKind::And:
    case QKind::Or: {
      std::vector<QbfPtr> ks;
      for (const auto& k : f->kids) ks.push_back(desugar_bool(k));
      return f->kind == QKind::And ? qand(std::move(ks)) : qor(std::move(ks));
    }
    case QKind::Implies: {
      QbfPtr a = desugar_bool(f->kids[0]);
      QbfPtr b = desugar_bool(f->kids[1]);
      return qor({qnot(a), b});
    }
    case QKind::Iff: {
      QbfPtr a = desugar_bool(f->kids[0]);
      QbfPtr b = desugar_bool(f->kids[1]);
      return qand({qor({qnot(a), b}), qor({qnot(b), a})});
    }
    case QKind::Forall:
      return qforall(f->var, desugar_bool(f->kids[0]));
    case QKind::Exists:
      return qexists(f->var, desugar_bool(f->kids[0]));
  }
  return f;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::string export_qcir(const QbfPtr& f) {
  std::map<std::string, std::vector<std::string>> scope;
  std::set<std::string> taken = qbf_free_vars(f);
  QbfPtr renamed = rename_apart(f, scope, taken);
  QbfPtr core = desugar_bool(renamed);

  std::set<std::string> names;
  collect_names(core, names);
  std::string gp = "g";
  auto clashes = [&] {
    for (const auto& n : names)
      if (n.size() > gp.size() && n.compare(0, gp.size(), gp) == 0 &&
          all_digits(n.substr(gp.size())))
        return true;
    return false;
  };
  while (clashes()) gp += "g";

  std::map<const Qbf*, std::string> memo;
  std::vector<std::string> lines;
  int counter = 0;
  std::function<std::string(const QbfPtr&)> emit =
      [&](const QbfPtr& n) -> std::string {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    std::string lit;
    switch (n->kind) {
      case QKind::Var:
        lit = n->var;
        break;
      case QKind::Top: {
        lit = gp + std::to_string(counter++);
        lines.push_back(lit + " = and()");
        break;
      }
      case QKind::Bot: {
        lit = gp + std::to_string(counter++);
        lines.push_back(lit + " = or()");
        break;
      }
      case QKind::Not: {
        std::string inner = emit(n->kids[0]);
        lit = inner[0] == '-' ? inner.substr(1) : "-" + inner;
        break;
      }
      case QKind::And:
      case QKind::Or: {
        std::string args;
        for (const auto& k : n->kids) {
          if (!args.empty()) args += ", ";
          args += emit(k);
        }
        lit = gp + std::to_string(counter++);
        lines.push_back(lit + (n->kind == QKind::And ? " = and(" : " = or(") +
                        args + ")");
        break;
      }
      case QKind::Forall:
      case QKind::Exists: {
        QKind q = n->kind;
        std::string vars = n->var;
        QbfPtr body = n->kids[0];
        while (body->kind == q) {
          vars += ", " + body->var;
          body = body->kids[0];
        }
        std::string arg = emit(body);
        lit = gp + std::to_string(counter++);
        lines.push_back(lit + (q == QKind::Forall ? " = forall(" : " = exists(") +
                        vars + "; " + arg + ")");
        break;
      }
      default:
        throw std::logic_error("export_qcir: connective not desugared");
    }
    memo[n.get()] = lit;
    return lit;
  };
  std::string root = emit(core);
  std::string out = "#QCIR-G14\n";
  out += "output(" + root + ")\n";
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cur = trim(cur);
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

QbfPtr parse_qcir(const std::string& text) {
  struct Gate {
    QKind kind;
    std::vector<std::string> vars;  // quantifier gates
    std::vector<std::string> args;  // literals
  };
  std::map<std::string, Gate> gates;
  std::vector<std::pair<QKind, std::vector<std::string>>> prefix;
  std::string output_lit;
  bool have_output = false;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto paren = line.find('(');
    auto eqpos = line.find('=');
    if (eqpos == std::string::npos || (paren != std::string::npos && paren < eqpos)) {
      // Statement without a gate name: output(...) or a prefix block.
      if (paren == std::string::npos || line.back() != ')')
        throw std::invalid_argument("parse_qcir: malformed line: " + line);
      std::string head = trim(line.substr(0, paren));
      std::string inner = line.substr(paren + 1, line.size() - paren - 2);
      if (head == "output") {
        output_lit = trim(inner);
        have_output = true;
      } else if (head == "forall" || head == "exists") {
        prefix.emplace_back(head == "forall" ? QKind::Forall : QKind::Exists,
                            split_list(inner, ','));
      } else if (head == "free") {
        // Free-variable declaration; nothing to build.
      } else {
        throw std::invalid_argument("parse_qcir: unknown statement: " + head);
      }
      continue;
    }
    std::string name = trim(line.substr(0, eqpos));
    std::string rhs = trim(line.substr(eqpos + 1));
    paren = rhs.find('(');
    if (paren == std::string::npos || rhs.back() != ')')
      throw std::invalid_argument("parse_qcir: malformed gate: " + line);
    std::string op = trim(rhs.substr(0, paren));
    std::string inner = rhs.substr(paren + 1, rhs.size() - paren - 2);
    Gate g;
    if (op == "and" || op == "or") {
      g.kind = op == "and" ? QKind::And : QKind::Or;
      g.args = split_list(inner, ',');
    } else if (op == "forall" || op == "exists") {
      g.kind = op == "forall" ? QKind::Forall : QKind::Exists;
      auto parts = split_list(inner, ';');
      if (parts.size() != 2)
        throw std::invalid_argument("parse_qcir: malformed quantifier gate: " +
                                    line);
      g.vars = split_list(parts[0], ',');
      g.args = {parts[1]};
    } else {
      throw std::invalid_argument("parse_qcir: unsupported gate type: " + op);
    }
    if (gates.count(name))
      throw std::invalid_argument("parse_qcir: duplicate gate: " + name);
    gates[name] = std::move(g);
  }
  if (!have_output)
    throw std::invalid_argument("parse_qcir: missing output statement");

  std::map<std::string, QbfPtr> done;
  std::set<std::string> building;
  std::function<QbfPtr(const std::string&)> resolve =
      [&](const std::string& lit) -> QbfPtr {
    if (lit.empty())
      throw std::invalid_argument("parse_qcir: empty literal");
    if (lit[0] == '-') return qnot(resolve(trim(lit.substr(1))));
    auto g = gates.find(lit);
    if (g == gates.end()) return qvar(lit);
    auto d = done.find(lit);
    if (d != done.end()) return d->second;
    if (building.count(lit))
      throw std::invalid_argument("parse_qcir: cyclic gate: " + lit);
    building.insert(lit);
    QbfPtr built;
    if (g->second.kind == QKind::And || g->second.kind == QKind::Or) {
      std::vector<QbfPtr> ks;
      for (const auto& a : g->second.args) ks.push_back(resolve(a));
      built = g->second.kind == QKind::And ? qand(std::move(ks))
                                           : qor(std::move(ks));
    } else {
      built = resolve(g->second.args[0]);
      for (auto it = g->second.vars.rbegin(); it != g->second.vars.rend(); ++it)
        built = g->second.kind == QKind::Forall ? qforall(*it, built)
                                                : qexists(*it, built);
    }
    building.erase(lit);
    done[lit] = built;
    return built;
  };
  QbfPtr out = resolve(output_lit);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    for (auto v = it->second.rbegin(); v != it->second.rend(); ++v)
      out = it->first == QKind::Forall ? qforall(*v, out) : qexists(*v, out);
  return out;
}

// ---------------------------------------------------------------------------
// QDIMACS export and import

namespace {

struct MNode {
  enum T { Lit, And, Or, True, False } t;
  int lit = 0;
  std::vector<MNode> kids;
};

struct PrenexBuilder {
  std::map<std::string, std::vector<int>> scope;
  std::map<std::string, int> free_ids;
  std::vector<std::pair<char, int>> blocks;  // 'a' or 'e', in prefix order
  int next_id = 1;

  MNode build(const QbfPtr& f, bool pos) {
    switch (f->kind) {
      case QKind::Var: {
        int id;
        auto it = scope.find(f->var);
        if (it != scope.end() && !it->second.empty()) {
          id = it->second.back();
        } else {
          auto fit = free_ids.find(f->var);
          if (fit == free_ids.end())
            fit = free_ids.emplace(f->var, next_id++).first;
          id = fit->second;
        }
        return MNode{MNode::Lit, pos ? id : -id, {}};
      }
      case QKind::Top:
        return MNode{pos ? MNode::True : MNode::False, 0, {}};
      case QKind::Bot:
        return MNode{pos ? MNode::False : MNode::True, 0, {}};
      case QKind::Not:
        return build(f->kids[0], !pos);
      case QKind::And:
      case QKind::Or: {
        bool conj = (f->kind == QKind::And) == pos;
        MNode n{conj ? MNode::And : MNode::Or, 0, {}};
        for (const auto& k : f->kids) n.kids.push_back(build(k, pos));
        return n;
      }
      case QKind::Forall:
      case QKind::Exists: {
        bool forall = (f->kind == QKind::Forall) == pos;
        int id = next_id++;
        blocks.emplace_back(forall ? 'a' : 'e', id);
        scope[f->var].push_back(id);
        MNode body = build(f->kids[0], pos);
        scope[f->var].pop_back();
        return body;
      }
      default:
        throw std::logic_error("prenex: connective not desugared");
    }
  }
};

MNode fold_constants(MNode n) {
  if (n.t != MNode::And && n.t != MNode::Or) return n;
  std::vector<MNode> ks;
  for (auto& k : n.kids) {
    MNode fk = fold_constants(std::move(k));
    if (n.t == MNode::And) {
      if (fk.t == MNode::False) return MNode{MNode::False, 0, {}};
      if (fk.t == MNode::True) continue;
    } else {
      if (fk.t == MNode::True) return MNode{MNode::True, 0, {}};
      if (fk.t == MNode::False) continue;
    }
    ks.push_back(std::move(fk));
  }
  if (ks.empty()) return MNode{n.t == MNode::And ? MNode::True : MNode::False, 0, {}};
  if (ks.size() == 1) return std::move(ks[0]);
  n.kids = std::move(ks);
  return n;
}

}  // namespace

std::string export_qdimacs(const QbfPtr& f) {
  QbfPtr core = desugar_bool(f);
  PrenexBuilder pb;
  MNode matrix = fold_constants(pb.build(core, true));

  // Free variables become an outermost existential block.
  std::vector<std::pair<char, int>> blocks;
  for (const auto& [name, id] : pb.free_ids) {
    (void)name;
    blocks.emplace_back('e', id);
  }
  blocks.insert(blocks.end(), pb.blocks.begin(), pb.blocks.end());

  int max_id = pb.next_id - 1;
  std::vector<std::vector<int>> clauses;
  std::vector<int> aux;
  std::function<int(const MNode&)> tseitin = [&](const MNode& n) -> int {
    if (n.t == MNode::Lit) return n.lit;
    int g = ++max_id;
    aux.push_back(g);
    std::vector<int> lits;
    for (const auto& k : n.kids) lits.push_back(tseitin(k));
    if (n.t == MNode::And) {
      std::vector<int> big{g};
      for (int l : lits) {
        clauses.push_back({-g, l});
        big.push_back(-l);
      }
      clauses.push_back(std::move(big));
    } else {
      std::vector<int> big{-g};
      for (int l : lits) {
        clauses.push_back({g, -l});
        big.push_back(l);
      }
      clauses.push_back(std::move(big));
    }
    return g;
  };
  if (matrix.t == MNode::False) {
    clauses.push_back({});
  } else if (matrix.t != MNode::True) {
    clauses.push_back({tseitin(matrix)});
  }

  // Merge adjacent blocks of the same kind; gate variables join the
  // innermost existential block.
  std::vector<std::pair<char, std::vector<int>>> merged;
  for (const auto& [kind, id] : blocks) {
    if (!merged.empty() && merged.back().first == kind)
      merged.back().second.push_back(id);
    else
      merged.push_back({kind, {id}});
  }
  if (!aux.empty()) {
    if (!merged.empty() && merged.back().first == 'e')
      merged.back().second.insert(merged.back().second.end(), aux.begin(),
                                  aux.end());
    else
      merged.push_back({'e', aux});
  }

  std::string out = "p cnf " + std::to_string(max_id) + " " +
                    std::to_string(clauses.size()) + "\n";
  for (const auto& [kind, ids] : merged) {
    out += kind;
    for (int id : ids) out += " " + std::to_string(id);
    out += " 0\n";
  }
  for (const auto& c : clauses) {
    std::string line;
    for (int l : c) line += std::to_string(l) + " ";
    out += line + "0\n";
  }
  return out;
}

QbfPtr parse_qdimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_p = false;
  std::vector<std::pair<char, std::vector<int>>> blocks;
  std::vector<std::vector<int>> clauses;
  std::vector<int> pending;
  bool in_clauses = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == 'c') continue;
    if (t[0] == 'p') {
      if (have_p) throw std::invalid_argument("parse_qdimacs: duplicate p line");
      have_p = true;
      continue;
    }
    if ((t[0] == 'a' || t[0] == 'e') && !in_clauses) {
      std::istringstream ls(t.substr(1));
      std::vector<int> ids;
      int v;
      while (ls >> v && v != 0) ids.push_back(v);
      blocks.emplace_back(t[0], std::move(ids));
      continue;
    }
    in_clauses = true;
    std::istringstream ls(t);
    int v;
    while (ls >> v) {
      if (v == 0) {
        clauses.push_back(pending);
        pending.clear();
      } else {
        pending.push_back(v);
      }
    }
  }
  if (!have_p) throw std::invalid_argument("parse_qdimacs: missing p line");
  if (!pending.empty())
    throw std::invalid_argument("parse_qdimacs: unterminated clause");

  auto vname = [](int id) { return "v" + std::to_string(id); };
  std::vector<QbfPtr> cnf;
  std::set<int> seen;
  for (const auto& c : clauses) {
    std::vector<QbfPtr> lits;
    for (int l : c) {
      seen.insert(std::abs(l));
      QbfPtr v = qvar(vname(std::abs(l)));
      lits.push_back(l > 0 ? v : qnot(v));
    }
    cnf.push_back(qor(std::move(lits)));
  }
  QbfPtr body = qand(std::move(cnf));
  std::set<int> quantified;
  for (const auto& [kind, ids] : blocks)
    for (int id : ids) quantified.insert(id);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    for (auto id = it->second.rbegin(); id != it->second.rend(); ++id)
      body = it->first == 'a' ? qforall(vname(*id), body)
                              : qexists(vname(*id), body);
  // Unquantified variables bind existentially at the very outside.
  for (auto it = seen.rbegin(); it != seen.rend(); ++it)
    if (!quantified.count(*it)) body = qexists(vname(*it), body);
  return body;
}

}  // namespace ctrfact
