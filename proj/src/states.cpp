#include "ctrfact/states.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

namespace ctrfact {

bool eval_prop(const FormulaPtr& f, const std::set<std::string>& valuation) {
  switch (f->kind) {
    case Kind::Atom:
      return valuation.count(f->name) != 0;
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Not:
      return !eval_prop(f->left, valuation);
    case Kind::And:
      return eval_prop(f->left, valuation) && eval_prop(f->right, valuation);
    case Kind::Or:
      return eval_prop(f->left, valuation) || eval_prop(f->right, valuation);
    case Kind::Implies:
      return !eval_prop(f->left, valuation) || eval_prop(f->right, valuation);
    case Kind::Iff:
      return eval_prop(f->left, valuation) == eval_prop(f->right, valuation);
    case Kind::Delta:
    case Kind::BoxRight:
    case Kind::DiamondRight:
      break;
  }
  throw std::invalid_argument("eval_prop: formula is not propositional: " +
                              render_formula(f));
}

bool is_compatible(const std::vector<FormulaPtr>& base,
                   const std::set<std::string>& valuation) {
  for (const auto& f : base)
    if (!eval_prop(f, valuation)) return false;
  return true;
}

std::vector<FormulaPtr> canonical_formulas(std::vector<FormulaPtr> fs) {
  std::sort(fs.begin(), fs.end(), FormulaLess{});
  fs.erase(std::unique(fs.begin(), fs.end(),
                       [](const FormulaPtr& a, const FormulaPtr& b) {
                         return equal(a, b);
                       }),
           fs.end());
  return fs;
}

State::State(std::vector<FormulaPtr> base_, std::set<std::string> valuation_)
    : base(canonical_formulas(std::move(base_))),
      valuation(std::move(valuation_)) {
  for (const auto& f : base)
    if (!eval_prop(f, valuation))
      throw std::invalid_argument(
          "state valuation is incompatible with base formula: " +
          render_formula(f));
}

bool operator==(const State& a, const State& b) {
  if (a.valuation != b.valuation || a.base.size() != b.base.size()) return false;
  for (std::size_t i = 0; i < a.base.size(); ++i)
    if (!equal(a.base[i], b.base[i])) return false;
  return true;
}

bool operator!=(const State& a, const State& b) { return !(a == b); }

Context::Context(std::vector<FormulaPtr> gamma_, std::set<std::string> sigma_,
                 FormulaPtr constraint_)
    : sigma(std::move(sigma_)),
      constraint(constraint_ ? std::move(constraint_) : top()) {
  for (auto& f : gamma_) {
    bool seen = false;
    for (const auto& g : gamma)
      if (equal(f, g)) {
        seen = true;
        break;
      }
    if (!seen) gamma.push_back(std::move(f));
  }
  for (const auto& f : gamma)
    if (!is_propositional(f))
      throw std::invalid_argument("context gamma member must be propositional: " +
                                  render_formula(f));
  if (!is_propositional(constraint))
    throw std::invalid_argument("context constraint must be propositional: " +
                                render_formula(constraint));
  std::set<std::string> needed;
  for (const auto& f : gamma)
    for (const auto& a : atoms_of(f)) needed.insert(a);
  for (const auto& a : atoms_of(constraint)) needed.insert(a);
  for (const auto& a : needed)
    if (!sigma.count(a))
      throw std::invalid_argument("context sigma is missing atom '" + a +
                                  "' used by gamma or the constraint");
}

int state_bound() {
  if (const char* env = std::getenv("CTRFACT_STATE_BOUND")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 30) return static_cast<int>(v);
  }
  return 20;
}

bool eval_prop_mask(const FormulaPtr& f, std::uint32_t mask,
                    const std::unordered_map<std::string, int>& atom_idx) {
  switch (f->kind) {
    case Kind::Atom: {
      auto it = atom_idx.find(f->name);
      return it != atom_idx.end() && ((mask >> it->second) & 1) != 0;
    }
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Not:
      return !eval_prop_mask(f->left, mask, atom_idx);
    case Kind::And:
      return eval_prop_mask(f->left, mask, atom_idx) &&
             eval_prop_mask(f->right, mask, atom_idx);
    case Kind::Or:
      return eval_prop_mask(f->left, mask, atom_idx) ||
             eval_prop_mask(f->right, mask, atom_idx);
    case Kind::Implies:
      return !eval_prop_mask(f->left, mask, atom_idx) ||
             eval_prop_mask(f->right, mask, atom_idx);
    case Kind::Iff:
      return eval_prop_mask(f->left, mask, atom_idx) ==
             eval_prop_mask(f->right, mask, atom_idx);
    default:
      throw std::invalid_argument("eval_prop_mask: not propositional");
  }
}

std::vector<State> enumerate_context(const Context& ctx) {
  const int g = static_cast<int>(ctx.gamma.size());
  const int s = static_cast<int>(ctx.sigma.size());
  if (g + s > state_bound())
    throw BoundError("enumerate_context: |gamma| + |sigma| = " +
                     std::to_string(g + s) + " exceeds the bound of " +
                     std::to_string(state_bound()));
  std::vector<std::string> atoms(ctx.sigma.begin(), ctx.sigma.end());
  std::unordered_map<std::string, int> idx;
  for (int i = 0; i < s; ++i) idx[atoms[i]] = i;

  // For each valuation mask, whether the constraint holds and which gamma
  // members it satisfies.
  const std::uint32_t vcount = std::uint32_t{1} << s;
  std::vector<char> chi_ok(vcount);
  std::vector<std::uint32_t> gsat(vcount);
  for (std::uint32_t v = 0; v < vcount; ++v) {
    chi_ok[v] = eval_prop_mask(ctx.constraint, v, idx);
    std::uint32_t bits = 0;
    for (int i = 0; i < g; ++i)
      if (eval_prop_mask(ctx.gamma[i], v, idx)) bits |= std::uint32_t{1} << i;
    gsat[v] = bits;
  }

  std::vector<State> out;
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << g); ++b) {
    std::vector<FormulaPtr> base;
    for (int i = 0; i < g; ++i)
      if ((b >> i) & 1) base.push_back(ctx.gamma[i]);
    for (std::uint32_t v = 0; v < vcount; ++v) {
      if (!chi_ok[v] || (gsat[v] & b) != b) continue;
      std::set<std::string> val;
      for (int i = 0; i < s; ++i)
        if ((v >> i) & 1) val.insert(atoms[i]);
      out.emplace_back(base, std::move(val));
    }
  }
  return out;
}

namespace {

bool base_contains(const std::vector<FormulaPtr>& base, const FormulaPtr& f) {
  for (const auto& g : base)
    if (equal(g, f)) return true;
  return false;
}

}  // namespace

bool at_least_as_close(const State& anchor, const State& a, const State& b) {
  // Base clause: anchor's base shares with b only what it shares with a.
  for (const auto& f : anchor.base)
    if (base_contains(b.base, f) && !base_contains(a.base, f)) return false;
  // Valuation clause: a diverges from the anchor only where b does too.
  std::set<std::string> universe = anchor.valuation;
  universe.insert(a.valuation.begin(), a.valuation.end());
  universe.insert(b.valuation.begin(), b.valuation.end());
  for (const auto& p : universe) {
    bool in_anchor = anchor.valuation.count(p) != 0;
    bool in_a = a.valuation.count(p) != 0;
    bool in_b = b.valuation.count(p) != 0;
    if (in_anchor != in_a && in_anchor == in_b) return false;
  }
  return true;
}

bool strictly_closer(const State& anchor, const State& a, const State& b) {
  return at_least_as_close(anchor, a, b) && !at_least_as_close(anchor, b, a);
}

std::vector<State> closest(const FormulaPtr& phi, const State& anchor,
                           const Context& ctx, const SatCallback& eval) {
  std::vector<State> all = enumerate_context(ctx);
  bool anchored = false;
  for (const auto& s : all)
    if (s == anchor) {
      anchored = true;
      break;
    }
  if (!anchored)
    throw std::invalid_argument(
        "closest: the anchor state does not belong to the context");
  std::vector<State> sat;
  for (auto& s : all)
    if (eval(s, phi)) sat.push_back(std::move(s));
  std::vector<State> out;
  for (const auto& s : sat) {
    bool beaten = false;
    for (const auto& rival : sat)
      if (strictly_closer(anchor, rival, s)) {
        beaten = true;
        break;
      }
    if (!beaten) out.push_back(s);
  }
  return out;
}

}  // namespace ctrfact
