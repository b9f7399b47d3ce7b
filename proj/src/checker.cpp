#include "ctrfact/checker.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace ctrfact {

StateSpace::StateSpace(const Context& ctx) : ctx_(ctx) {
  const int g = static_cast<int>(ctx_.gamma.size());
  const int s = static_cast<int>(ctx_.sigma.size());
  if (g + s > state_bound())
    throw BoundError("StateSpace: |gamma| + |sigma| = " + std::to_string(g + s) +
                     " exceeds the bound of " + std::to_string(state_bound()));
  sigma_.assign(ctx_.sigma.begin(), ctx_.sigma.end());
  for (int i = 0; i < s; ++i) atom_idx_[sigma_[i]] = i;

  const std::uint32_t vcount = std::uint32_t{1} << s;
  std::vector<char> chi_ok(vcount);
  std::vector<std::uint32_t> gsat(vcount);
  for (std::uint32_t v = 0; v < vcount; ++v) {
    chi_ok[v] = eval_prop_mask(ctx_.constraint, v, atom_idx_);
    std::uint32_t bits = 0;
    for (int i = 0; i < g; ++i)
      if (eval_prop_mask(ctx_.gamma[i], v, atom_idx_))
        bits |= std::uint32_t{1} << i;
    gsat[v] = bits;
  }
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << g); ++b)
    for (std::uint32_t v = 0; v < vcount; ++v)
      if (chi_ok[v] && (gsat[v] & b) == b) states_.emplace_back(b, v);
}

State StateSpace::state_at(int i) const {
  auto [b, v] = states_[static_cast<std::size_t>(i)];
  std::vector<FormulaPtr> base;
  for (std::size_t k = 0; k < ctx_.gamma.size(); ++k)
    if ((b >> k) & 1) base.push_back(ctx_.gamma[k]);
  std::set<std::string> val;
  for (std::size_t k = 0; k < sigma_.size(); ++k)
    if ((v >> k) & 1) val.insert(sigma_[k]);
  return State(std::move(base), std::move(val));
}

int StateSpace::index_of(const State& s) const {
  std::uint32_t b = 0;
  for (const auto& f : s.base) {
    bool found = false;
    for (std::size_t k = 0; k < ctx_.gamma.size(); ++k)
      if (equal(f, ctx_.gamma[k])) {
        b |= std::uint32_t{1} << k;
        found = true;
        break;
      }
    if (!found) return -1;
  }
  std::uint32_t v = 0;
  for (const auto& p : s.valuation) {
    auto it = atom_idx_.find(p);
    if (it == atom_idx_.end()) return -1;
    v |= std::uint32_t{1} << it->second;
  }
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].first == b && states_[i].second == v)
      return static_cast<int>(i);
  return -1;
}

std::vector<signed char>& StateSpace::memo_row(const FormulaPtr& f) {
  auto it = memo_.find(f.get());
  if (it != memo_.end()) return it->second;
  pinned_.push_back(f);
  return memo_.emplace(f.get(), std::vector<signed char>(states_.size(), -1))
      .first->second;
}

bool StateSpace::satisfies_at(int i, const FormulaPtr& f) {
  auto& row = memo_row(f);
  if (row[i] >= 0) return row[i] != 0;
  bool v = false;
  switch (f->kind) {
    case Kind::Atom: {
      auto it = atom_idx_.find(f->name);
      v = it != atom_idx_.end() && ((states_[i].second >> it->second) & 1) != 0;
      break;
    }
    case Kind::Top:
      v = true;
      break;
    case Kind::Bot:
      v = false;
      break;
    case Kind::Not:
      v = !satisfies_at(i, f->left);
      break;
    case Kind::And:
      v = satisfies_at(i, f->left) && satisfies_at(i, f->right);
      break;
    case Kind::Or:
      v = satisfies_at(i, f->left) || satisfies_at(i, f->right);
      break;
    case Kind::Implies:
      v = !satisfies_at(i, f->left) || satisfies_at(i, f->right);
      break;
    case Kind::Iff:
      v = satisfies_at(i, f->left) == satisfies_at(i, f->right);
      break;
    case Kind::Delta: {
      // True exactly when the body belongs to the state's base.
      v = false;
      for (std::size_t k = 0; k < ctx_.gamma.size(); ++k)
        if (equal(f->left, ctx_.gamma[k])) {
          v = ((states_[i].first >> k) & 1) != 0;
          break;
        }
      break;
    }
    case Kind::BoxRight: {
      v = true;
      for (int j : closest_indices(f->left, i))
        if (!satisfies_at(j, f->right)) {
          v = false;
          break;
        }
      break;
    }
    case Kind::DiamondRight: {
      // phi <>-> psi is ~(phi []-> ~psi): some closest phi-state is a
      // psi-state.
      v = false;
      for (int j : closest_indices(f->left, i))
        if (satisfies_at(j, f->right)) {
          v = true;
          break;
        }
      break;
    }
  }
  memo_.find(f.get())->second[i] = v ? 1 : 0;
  return v;
}

std::vector<int> StateSpace::closest_indices(const FormulaPtr& phi, int anchor) {
  memo_row(phi);  // pin phi
  auto& per_anchor = closest_memo_[phi.get()];
  auto hit = per_anchor.find(anchor);
  if (hit != per_anchor.end()) return hit->second;

  // One entry per phi-state: its base-intersection and valuation
  // symmetric-difference masks relative to the anchor. A strict dominator
  // has a superset intersection and a subset difference, so under the sort
  // (|difference| ascending, |intersection| descending) every dominator
  // precedes whatever it beats and each state only scans its prefix.
  auto [cb, cv] = states_[static_cast<std::size_t>(anchor)];
  struct Cand {
    int idx;
    std::uint32_t bi, dm;
    int dpop, bipop;
  };
  std::vector<Cand> cand;
  for (int i = 0; i < size(); ++i)
    if (satisfies_at(i, phi)) {
      auto [b, v] = states_[static_cast<std::size_t>(i)];
      std::uint32_t bi = b & cb, dm = v ^ cv;
      cand.push_back({i, bi, dm, std::popcount(dm), std::popcount(bi)});
    }
  std::sort(cand.begin(), cand.end(), [](const Cand& x, const Cand& y) {
    if (x.dpop != y.dpop) return x.dpop < y.dpop;
    return x.bipop > y.bipop;
  });
  std::vector<int> kept;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const Cand& c = cand[k];
    bool beaten = false;
    for (std::size_t j = 0; j < k; ++j) {
      const Cand& d = cand[j];
      if ((d.bi & c.bi) == c.bi && (d.dm & c.dm) == d.dm &&
          (d.bi != c.bi || d.dm != c.dm)) {
        beaten = true;
        break;
      }
    }
    if (!beaten) kept.push_back(c.idx);
  }
  std::sort(kept.begin(), kept.end());
  // closest_memo_ may rehash on insert; recompute the slot.
  auto& slot = closest_memo_[phi.get()][anchor];
  slot = kept;
  return kept;
}

bool StateSpace::packed_at_least_as_close(int anchor, int a, int b) const {
  auto [cb, cv] = states_[anchor];
  auto [ab, av] = states_[a];
  auto [bb, bv] = states_[b];
  if ((cb & bb & ~ab) != 0) return false;
  if (((cv ^ av) & ~(cv ^ bv)) != 0) return false;
  return true;
}

bool StateSpace::packed_strictly_closer(int anchor, int a, int b) const {
  return packed_at_least_as_close(anchor, a, b) &&
         !packed_at_least_as_close(anchor, b, a);
}

bool satisfies(const State& state, const Context& ctx, const FormulaPtr& f) {
  StateSpace sp(ctx);
  int i = sp.index_of(state);
  if (i < 0)
    throw std::invalid_argument(
        "satisfies: the state does not belong to the context");
  return sp.satisfies_at(i, f);
}

bool model_check(const FormulaPtr& psi, const std::vector<FormulaPtr>& gamma,
                 const State& state, const FormulaPtr& constraint) {
  FormulaPtr chi = constraint ? constraint : top();
  std::set<std::string> sigma;
  for (const auto& g : gamma)
    for (const auto& a : atoms_of(g)) sigma.insert(a);
  for (const auto& a : atoms_of(psi)) sigma.insert(a);
  for (const auto& a : atoms_of(chi)) sigma.insert(a);
  Context ctx(gamma, sigma, chi);
  std::set<std::string> val;
  for (const auto& p : state.valuation)
    if (sigma.count(p)) val.insert(p);
  return satisfies(State(state.base, std::move(val)), ctx, psi);
}

std::vector<State> closest_set(const FormulaPtr& phi, const State& anchor,
                               const Context& ctx) {
  StateSpace sp(ctx);
  int i = sp.index_of(anchor);
  if (i < 0)
    throw std::invalid_argument(
        "closest_set: the anchor state does not belong to the context");
  std::vector<State> out;
  for (int j : sp.closest_indices(phi, i)) out.push_back(sp.state_at(j));
  return out;
}

int pick(std::mt19937_64& rng, int n) {
  return n <= 1 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

FormulaPtr random_prop(std::mt19937_64& rng,
                       const std::vector<std::string>& atoms, int depth) {
  if (depth <= 0 || pick(rng, 4) == 0 || atoms.empty()) {
    if (atoms.empty() || pick(rng, 10) == 0)
      return pick(rng, 2) ? top() : bot();
    return atom(atoms[pick(rng, static_cast<int>(atoms.size()))]);
  }
  switch (pick(rng, 5)) {
    case 0:
      return neg(random_prop(rng, atoms, depth - 1));
    case 1:
      return conj(random_prop(rng, atoms, depth - 1),
                  random_prop(rng, atoms, depth - 1));
    case 2:
      return disj(random_prop(rng, atoms, depth - 1),
                  random_prop(rng, atoms, depth - 1));
    case 3:
      return implies(random_prop(rng, atoms, depth - 1),
                     random_prop(rng, atoms, depth - 1));
    default:
      return iff(random_prop(rng, atoms, depth - 1),
                 random_prop(rng, atoms, depth - 1));
  }
}

FormulaPtr random_cond(std::mt19937_64& rng,
                       const std::vector<std::string>& atoms, int depth,
                       int cond_budget) {
  if (depth <= 0 || pick(rng, 5) == 0 || atoms.empty()) {
    if (atoms.empty() || pick(rng, 10) == 0)
      return pick(rng, 2) ? top() : bot();
    return atom(atoms[pick(rng, static_cast<int>(atoms.size()))]);
  }
  int reach = cond_budget > 0 ? 9 : 7;
  switch (pick(rng, reach)) {
    case 0:
      return neg(random_cond(rng, atoms, depth - 1, cond_budget));
    case 1:
      return conj(random_cond(rng, atoms, depth - 1, cond_budget),
                  random_cond(rng, atoms, depth - 1, cond_budget));
    case 2:
      return disj(random_cond(rng, atoms, depth - 1, cond_budget),
                  random_cond(rng, atoms, depth - 1, cond_budget));
    case 3:
      return implies(random_cond(rng, atoms, depth - 1, cond_budget),
                     random_cond(rng, atoms, depth - 1, cond_budget));
    case 4:
      return iff(random_cond(rng, atoms, depth - 1, cond_budget),
                 random_cond(rng, atoms, depth - 1, cond_budget));
    case 5:
    case 6:
      return delta(random_prop(rng, atoms, std::min(depth - 1, 2)));
    case 7:
      return box(random_cond(rng, atoms, depth - 1, cond_budget - 1),
                 random_cond(rng, atoms, depth - 1, cond_budget - 1));
    default:
      return diamond(random_cond(rng, atoms, depth - 1, cond_budget - 1),
                     random_cond(rng, atoms, depth - 1, cond_budget - 1));
  }
}

std::optional<Countermodel> check_validity(const FormulaPtr& f,
                                           const SearchBounds& bounds) {
  std::set<std::string> atom_set = atoms_of(f);
  if (static_cast<int>(atom_set.size()) > bounds.max_sigma)
    throw std::invalid_argument(
        "check_validity: the formula has more atoms than max_sigma");

  if (bounds.exhaustive) {
    std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
    std::vector<FormulaPtr> pool;
    for (const auto& a : atoms) {
      pool.push_back(atom(a));
      pool.push_back(neg(atom(a)));
    }
    for (const auto& a : atoms)
      for (const auto& b : atoms)
        if (a != b) pool.push_back(implies(atom(a), atom(b)));
    std::vector<FormulaPtr> chis{top()};
    for (const auto& a : atoms) {
      chis.push_back(atom(a));
      chis.push_back(neg(atom(a)));
    }
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j)
        chis.push_back(disj(atom(atoms[i]), atom(atoms[j])));

    std::optional<Countermodel> found;
    std::vector<FormulaPtr> cur;
    std::function<bool(std::size_t)> go = [&](std::size_t start) -> bool {
      for (const auto& chi : chis) {
        Context ctx(cur, atom_set, chi);
        StateSpace sp(ctx);
        for (int i = 0; i < sp.size(); ++i)
          if (!sp.satisfies_at(i, f)) {
            found = Countermodel{ctx, sp.state_at(i)};
            return true;
          }
      }
      if (static_cast<int>(cur.size()) == bounds.max_gamma) return false;
      for (std::size_t j = start; j < pool.size(); ++j) {
        cur.push_back(pool[j]);
        if (go(j + 1)) return true;
        cur.pop_back();
      }
      return false;
    };
    go(0);
    return found;
  }

  // Random mode: sample a context over the formula's atoms padded to
  // max_sigma, then test f at one random state of it.
  std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  for (int k = 0; static_cast<int>(atoms.size()) < bounds.max_sigma; ++k) {
    std::string fresh = "u" + std::to_string(k);
    if (!atom_set.count(fresh)) {
      atoms.push_back(fresh);
      atom_set.insert(fresh);
    }
  }
  std::mt19937_64 rng(bounds.seed);
  for (int sample = 0; sample < bounds.samples; ++sample) {
    int gcount = pick(rng, bounds.max_gamma + 1);
    std::vector<FormulaPtr> gamma;
    for (int k = 0; k < gcount; ++k) gamma.push_back(random_prop(rng, atoms, 2));
    FormulaPtr chi = pick(rng, 3) == 0 ? top() : random_prop(rng, atoms, 2);
    Context ctx(gamma, atom_set, chi);
    StateSpace sp(ctx);
    if (sp.size() == 0) continue;
    int i = pick(rng, sp.size());
    if (!sp.satisfies_at(i, f)) return Countermodel{ctx, sp.state_at(i)};
  }
  return std::nullopt;
}

}  // namespace ctrfact
