#include "ctrfact/validate.hpp"

#include <algorithm>
#include <functional>

#include "ctrfact/qbf.hpp"

namespace ctrfact {

EquationalState random_equational_state(std::mt19937_64& rng, int max_endo,
                                        int max_exo, int max_body_atoms) {
  int ne = 1 + pick(rng, max_endo);
  int nx = 1 + pick(rng, max_exo);
  std::vector<std::string> order;
  for (int i = 0; i < nx; ++i) order.push_back("u" + std::to_string(i));
  std::map<std::string, FormulaPtr> eqs;
  std::vector<std::string> heads;
  for (int i = 0; i < ne; ++i) {
    std::string h = "e" + std::to_string(i);
    std::vector<std::string> pool;
    int k = 1 + pick(rng, max_body_atoms);
    for (int j = 0; j < k; ++j)
      pool.push_back(order[pick(rng, static_cast<int>(order.size()))]);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    FormulaPtr body = pick(rng, 12) == 0 ? (pick(rng, 2) ? top() : bot())
                                         : random_prop(rng, pool, 2);
    eqs[h] = body;
    order.push_back(h);
    heads.push_back(h);
  }
  std::set<std::string> val;
  for (int i = 0; i < nx; ++i)
    if (pick(rng, 2)) val.insert("u" + std::to_string(i));
  for (const auto& h : heads)
    if (eval_prop(eqs[h], val)) val.insert(h);
  return EquationalState(std::move(eqs), std::move(val));
}

EquationalState suzy_state() {
  std::map<std::string, FormulaPtr> eqs{
      {"st", atom("sd")},
      {"bt", atom("bd")},
      {"sh", atom("st")},
      {"bh", conj(atom("bt"), neg(atom("sh")))},
      {"bs", disj(atom("sh"), atom("bh"))},
  };
  return EquationalState(std::move(eqs),
                         {"sd", "bd", "st", "bt", "sh", "bs"});
}

namespace {

std::set<std::string> base_atoms_of(const EquationalState& s) {
  std::set<std::string> out;
  for (const auto& [head, body] : s.equations) {
    out.insert(head);
    for (const auto& a : atoms_of(body)) out.insert(a);
  }
  return out;
}

// Literal reading of the but-condition: instead of solving equations, range
// over every valuation of the intervened base's atoms and demand that all
// compatible ones matching the actual exogenous values falsify omega.
bool but_condition_reference(const EquationalState& s, const Term& lambda,
                             const FormulaPtr& omega) {
  auto [endo, exo] = classify_variables(s);
  std::set<std::string> lam_atoms;
  for (const auto& [a, v] : lambda) {
    (void)v;
    lam_atoms.insert(a);
  }
  std::vector<std::string> lam(lam_atoms.begin(), lam_atoms.end());
  std::vector<std::string> freezable;
  for (const auto& a : endo)
    if (!lam_atoms.count(a)) freezable.push_back(a);
  std::set<std::string> batoms = base_atoms_of(s);
  std::vector<std::string> bav(batoms.begin(), batoms.end());

  for (std::uint32_t pm = 0; pm < (1u << lam.size()); ++pm) {
    Intervention e;
    for (std::size_t i = 0; i < lam.size(); ++i)
      e[lam[i]] = ((pm >> i) & 1) != 0;
    for (std::uint32_t zm = 0; zm < (1u << freezable.size()); ++zm) {
      Intervention full = e;
      for (std::size_t i = 0; i < freezable.size(); ++i)
        if ((zm >> i) & 1)
          full[freezable[i]] = s.valuation.count(freezable[i]) != 0;
      auto cbase = intervene_base(s.equations, full);
      bool all_falsify = true;
      for (std::uint32_t vm = 0; vm < (1u << bav.size()) && all_falsify; ++vm) {
        std::set<std::string> v2;
        for (std::size_t i = 0; i < bav.size(); ++i)
          if ((vm >> i) & 1) v2.insert(bav[i]);
        bool compatible = true;
        for (const auto& [h, b] : cbase)
          if ((v2.count(h) != 0) != eval_prop(b, v2)) {
            compatible = false;
            break;
          }
        if (!compatible) continue;
        bool exo_match = true;
        for (const auto& a : exo)
          if ((v2.count(a) != 0) != (s.valuation.count(a) != 0)) {
            exo_match = false;
            break;
          }
        if (!exo_match) continue;
        if (eval_prop(omega, v2)) all_falsify = false;
      }
      if (all_falsify) return true;
    }
  }
  return false;
}

// Exactly one compatible valuation of the intervened base matches the
// state's exogenous values, and it is the solved one.
bool post_intervention_unique(const EquationalState& s, const Intervention& e,
                              std::string* what) {
  auto [endo, exo] = classify_variables(s);
  std::set<std::string> batoms = base_atoms_of(s);
  std::vector<std::string> bav(batoms.begin(), batoms.end());
  auto cbase = intervene_base(s.equations, e);
  EquationalState solved = solve_post_intervention(s, e);
  int matches = 0;
  bool solved_seen = false;
  for (std::uint32_t vm = 0; vm < (1u << bav.size()); ++vm) {
    std::set<std::string> v2;
    for (std::size_t i = 0; i < bav.size(); ++i)
      if ((vm >> i) & 1) v2.insert(bav[i]);
    bool compatible = true;
    for (const auto& [h, b] : cbase)
      if ((v2.count(h) != 0) != eval_prop(b, v2)) {
        compatible = false;
        break;
      }
    if (!compatible) continue;
    bool pinned = true;
    for (const auto& a : exo)
      if ((v2.count(a) != 0) != (s.valuation.count(a) != 0)) {
        pinned = false;
        break;
      }
    if (!pinned) continue;
    ++matches;
    bool same = true;
    for (const auto& a : bav)
      if ((v2.count(a) != 0) != (solved.valuation.count(a) != 0)) {
        same = false;
        break;
      }
    if (same) solved_seen = true;
  }
  if (matches == 1 && solved_seen) return true;
  if (what)
    *what = "matches=" + std::to_string(matches) +
            " solved_seen=" + std::to_string(solved_seen);
  return false;
}

std::string describe_eqs(const EquationalState& s) {
  std::string out;
  for (const auto& [h, b] : s.equations)
    out += h + "<->" + render_formula(b) + "; ";
  out += "V={";
  for (const auto& a : s.valuation) out += a + ",";
  out += "}";
  return out;
}

}  // namespace

SuiteReport run_validity_suite(std::uint64_t seed, int samples) {
  SuiteReport r{"validities", 0, 0, {}, {}};
  FormulaPtr p = atom("p"), q = atom("q"), rr = atom("r");

  enum Shape { kId, kWC, kDisj, kTermPos, kTermNeg, kTermDelta, kInteraction };
  auto instantiate = [&](Shape v, const FormulaPtr& f1, const FormulaPtr& f2,
                         const FormulaPtr& f3) -> FormulaPtr {
    switch (v) {
      case kId:
        return box(f1, f1);
      case kWC:
        return implies(box(f1, f2), implies(f1, f2));
      case kDisj:
        return implies(conj(box(f1, f3), box(f2, f3)),
                       box(disj(f1, f2), f3));
      case kTermPos:
        return implies(conj(p, box(f1, f2)), box(conj(f1, p), f2));
      case kTermNeg:
        return implies(conj(neg(p), box(f1, f2)), box(conj(f1, neg(p)), f2));
      case kTermDelta:
        return implies(conj(delta(f3), box(f1, f2)),
                       box(conj(f1, delta(f3)), f2));
      case kInteraction:
        return box(delta(f3), f3);
    }
    return top();
  };
  static const char* names[] = {"id",       "weak-centering", "disjunction",
                                "term-pos", "term-neg",       "term-delta",
                                "interaction"};

  // Exhaustive search over small contexts for a fixed instantiation pool.
  std::vector<FormulaPtr> props{p,          q,           neg(p),
                                conj(p, q), disj(p, q),  implies(p, q),
                                neg(q),     conj(p, neg(q))};
  std::vector<FormulaPtr> omegas{p, neg(p), conj(p, q), implies(p, q)};
  SearchBounds ex;  // defaults: exhaustive, |gamma| <= 2, |sigma| <= 3
  auto run_exhaustive = [&](Shape v, const FormulaPtr& f1, const FormulaPtr& f2,
                            const FormulaPtr& f3) {
    FormulaPtr inst = instantiate(v, f1, f2, f3);
    auto cm = check_validity(inst, ex);
    r.tally(!cm.has_value(),
            std::string("exhaustive countermodel for ") + names[v] + ": " +
                render_formula(inst),
            "exhaustive");
  };
  for (const auto& f1 : props) run_exhaustive(kId, f1, nullptr, nullptr);
  for (const auto& f1 : {p, neg(p), disj(p, q), implies(p, q)})
    for (const auto& f2 : {q, neg(q), conj(p, q)})
      run_exhaustive(kWC, f1, f2, nullptr);
  for (const auto& f1 : {p, neg(p)})
    for (const auto& f2 : {q, neg(q)})
      for (const auto& f3 : {rr, disj(p, q), neg(q)})
        run_exhaustive(kDisj, f1, f2, f3);
  for (const auto& f1 : {q, neg(q), disj(q, rr), implies(rr, q)})
    for (const auto& f2 : {rr, q, neg(rr)}) {
      run_exhaustive(kTermPos, f1, f2, nullptr);
      run_exhaustive(kTermNeg, f1, f2, nullptr);
    }
  for (const auto& f3 : {p, implies(p, q)})
    for (const auto& f1 : {q, neg(q), rr})
      for (const auto& f2 : {rr, q}) run_exhaustive(kTermDelta, f1, f2, f3);
  for (const auto& f3 : omegas) run_exhaustive(kInteraction, f3, nullptr, f3);

  // Seeded random models per validity.
  std::vector<std::string> atoms3{"p", "q", "r"};
  int insts = std::max(1, samples / 50);
  int per = (samples + insts - 1) / insts;
  for (int v = 0; v < 7; ++v) {
    std::mt19937_64 rng(seed + 1000 * v);
    int models = 0;
    bool bad = false;
    std::string what;
    for (int i = 0; i < insts && !bad; ++i) {
      auto any = [&]() -> FormulaPtr {
        return pick(rng, 2) ? random_prop(rng, atoms3, 2)
                            : random_cond(rng, atoms3, 2, 1);
      };
      FormulaPtr f1 = any(), f2 = any();
      FormulaPtr f3 = static_cast<Shape>(v) == kDisj
                          ? any()
                          : random_prop(rng, atoms3, 2);
      FormulaPtr inst = instantiate(static_cast<Shape>(v), f1, f2, f3);
      SearchBounds rb;
      rb.exhaustive = false;
      rb.max_gamma = 3;
      rb.max_sigma = 5;
      rb.samples = per;
      rb.seed = seed + 1000 * v + i + 1;
      auto cm = check_validity(inst, rb);
      models += per;
      if (cm.has_value()) {
        bad = true;
        what = std::string("random countermodel for ") + names[v] + ": " +
               render_formula(inst);
      }
    }
    r.tally(!bad && models >= samples, what.empty() ? "sample shortfall" : what,
            "random");
  }

  // Weak centering membership and the strong-centering failure witness.
  {
    Context ctx({p}, {"p"}, top());
    State anchor({}, {"p"});
    auto cs = closest_set(p, anchor, ctx);
    bool member = false;
    for (const auto& s : cs)
      if (s == anchor) member = true;
    r.tally(member, "weak centering: anchor not among its closest p-states",
            "centering");
    r.tally(cs.size() == 2,
            "strong centering witness: |closest| = " +
                std::to_string(cs.size()) + ", expected 2",
            "centering");
  }

  // Rational monotonicity: the fixed countermodel, then a bounded search.
  {
    FormulaPtr phi = disj(conj(p, conj(neg(q), neg(rr))), conj(neg(p), q));
    FormulaPtr chi = disj(p, rr);
    FormulaPtr psi = neg(conj(q, rr));
    FormulaPtr rm =
        implies(conj(box(phi, psi), diamond(phi, chi)), box(conj(phi, chi), psi));
    Context ctx({}, {"p", "q", "r"}, top());
    State anchor({}, {});
    r.tally(!satisfies(anchor, ctx, rm),
            "fixed RM countermodel no longer falsifies the axiom", "rm-fixed");

    // Bounded search: systematic pass over disjunction-of-literal antecedents
    // in the base-free space (where incomparable closest sets are easy to
    // produce), then a random phase over deeper shapes and richer contexts.
    bool found = false;
    {
      std::vector<FormulaPtr> lits{p, q, rr, neg(p), neg(q), neg(rr)};
      Context cx({}, {"p", "q", "r"}, top());
      StateSpace sp(cx);
      for (std::size_t a = 0; a < lits.size() && !found; ++a)
        for (std::size_t b = a + 1; b < lits.size() && !found; ++b)
          for (std::size_t c = 0; c < lits.size() && !found; ++c)
            for (std::size_t d = c + 1; d < lits.size() && !found; ++d)
              for (const auto& f2 : lits) {
                FormulaPtr f1 = disj(lits[a], lits[b]);
                FormulaPtr f3 = disj(lits[c], lits[d]);
                FormulaPtr inst = implies(conj(box(f1, f2), diamond(f1, f3)),
                                          box(conj(f1, f3), f2));
                for (int s = 0; s < sp.size() && !found; ++s)
                  if (!sp.satisfies_at(s, inst)) found = true;
                if (found) break;
              }
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    int budget = std::max(50, samples / 4);
    for (int i = 0; i < budget && !found; ++i) {
      FormulaPtr f1 = random_prop(rng, atoms3, 2);
      FormulaPtr f2 = random_prop(rng, atoms3, 2);
      FormulaPtr f3 = random_prop(rng, atoms3, 2);
      FormulaPtr inst =
          implies(conj(box(f1, f2), diamond(f1, f3)), box(conj(f1, f3), f2));
      std::vector<FormulaPtr> gamma;
      int gc = pick(rng, 2) ? 0 : pick(rng, 3);
      for (int g = 0; g < gc; ++g) gamma.push_back(random_prop(rng, atoms3, 2));
      FormulaPtr c = pick(rng, 3) == 0 ? random_prop(rng, atoms3, 2) : top();
      Context cx(gamma, {"p", "q", "r"}, c);
      StateSpace sp(cx);
      for (int s = 0; s < sp.size() && !found; ++s)
        if (!sp.satisfies_at(s, inst)) found = true;
    }
    r.tally(found, "bounded search found no RM countermodel", "rm-search");
  }
  return r;
}

SuiteReport run_causal_suite(std::uint64_t seed, int samples) {
  SuiteReport r{"causal", 0, 0, {}, {}};
  std::mt19937_64 rng(seed);
  int flipped_extra = samples / 4;
  for (int i = 0; i < samples + flipped_extra; ++i) {
    bool flip = i >= samples;
    EquationalState s = random_equational_state(rng, 5, 3, 3);
    auto [endo, exo] = classify_variables(s);
    std::vector<std::string> ev(endo.begin(), endo.end());
    int k = 1 + pick(rng, std::min<int>(2, static_cast<int>(ev.size())));
    Term lambda;
    for (int j = 0; j < k; ++j) {
      const std::string& a = ev[pick(rng, static_cast<int>(ev.size()))];
      lambda[a] = s.valuation.count(a) != 0;
    }
    if (flip) {
      auto it = lambda.begin();
      std::advance(it, pick(rng, static_cast<int>(lambda.size())));
      it->second = !it->second;
    }
    std::set<std::string> batoms = base_atoms_of(s);
    std::vector<std::string> bv(batoms.begin(), batoms.end());
    std::vector<std::string> opool;
    int na = 1 + pick(rng, std::min<int>(3, static_cast<int>(bv.size())));
    for (int j = 0; j < na; ++j)
      opool.push_back(bv[pick(rng, static_cast<int>(bv.size()))]);
    std::sort(opool.begin(), opool.end());
    opool.erase(std::unique(opool.begin(), opool.end()), opool.end());
    FormulaPtr omega = random_prop(rng, opool, 2);

    std::string tag = " @ sample " + std::to_string(i) + " " + describe_eqs(s) +
                      " lambda=" + render_term(lambda) +
                      " omega=" + render_formula(omega);

    bool bc = but_condition(s, lambda, omega);
    r.tally(bc == but_condition_reference(s, lambda, omega),
            "successor-form divergence" + tag, "successor-form");
    if (!flip)
      r.tally(bc == but_condition_via_might(s, lambda, omega),
              "intervention/might divergence" + tag, "might");
    r.tally(is_actual_cause(s, lambda, omega) ==
                actual_cause_via_counterfactuals(s, lambda, omega),
            "cause-route divergence" + tag, "cause-route");

    Intervention e;
    for (const auto& a : ev)
      if (pick(rng, 2)) e[a] = pick(rng, 2) != 0;
    std::string what;
    bool uniq = post_intervention_unique(s, e, &what);
    r.tally(uniq, "successor-uniqueness failure (" + what + ")" + tag,
            "uniqueness");
  }
  return r;
}

SuiteReport run_qbf_mc_suite(std::uint64_t seed, int samples) {
  SuiteReport r{"qbf-mc", 0, 0, {}, {}};
  std::mt19937_64 rng(seed);
  std::vector<std::string> atoms4{"a", "b", "c", "d"};
  int attempts = 0, cap = samples * 20;
  while (r.passed + r.failed < samples && attempts++ < cap) {
    std::vector<FormulaPtr> gamma;
    int gc = pick(rng, 4);
    for (int i = 0; i < gc; ++i) gamma.push_back(random_prop(rng, atoms4, 2));
    FormulaPtr psi = random_cond(rng, atoms4, 4, 1);
    FormulaPtr chi = pick(rng, 3) == 0 ? random_prop(rng, atoms4, 2) : nullptr;
    std::set<std::string> sigma;
    for (const auto& g : gamma)
      for (const auto& a : atoms_of(g)) sigma.insert(a);
    for (const auto& a : atoms_of(psi)) sigma.insert(a);
    if (chi)
      for (const auto& a : atoms_of(chi)) sigma.insert(a);
    std::vector<State> pool;
    try {
      pool = enumerate_context(Context(gamma, sigma, chi ? chi : top()));
    } catch (const std::exception&) {
      continue;
    }
    if (pool.empty()) continue;
    State anchor = pool[pick(rng, static_cast<int>(pool.size()))];
    bool brute = model_check(psi, gamma, anchor, chi);
    bool via_qbf = eval_qbf(encode_mc(psi, gamma, anchor, chi));
    r.tally(brute == via_qbf,
            "qbf-mc divergence on psi=" + render_formula(psi));
  }
  return r;
}

namespace {

QbfPtr random_closed_qbf(std::mt19937_64& rng,
                         std::vector<std::string>& bound, int depth,
                         int& qbudget, int& fresh) {
  bool leaf = depth == 0 || pick(rng, 4) == 0;
  if (leaf) {
    if (bound.empty() || pick(rng, 6) == 0)
      return pick(rng, 2) ? qtop() : qbot();
    return qvar(bound[pick(rng, static_cast<int>(bound.size()))]);
  }
  int c = pick(rng, qbudget > 0 ? 8 : 6);
  switch (c) {
    case 0:
      return qnot(random_closed_qbf(rng, bound, depth - 1, qbudget, fresh));
    case 1:
      return qand({random_closed_qbf(rng, bound, depth - 1, qbudget, fresh),
                   random_closed_qbf(rng, bound, depth - 1, qbudget, fresh)});
    case 2:
      return qor({random_closed_qbf(rng, bound, depth - 1, qbudget, fresh),
                  random_closed_qbf(rng, bound, depth - 1, qbudget, fresh)});
    case 3:
      return qimplies(random_closed_qbf(rng, bound, depth - 1, qbudget, fresh),
                      random_closed_qbf(rng, bound, depth - 1, qbudget, fresh));
    case 4:
    case 5:
      return qiff(random_closed_qbf(rng, bound, depth - 1, qbudget, fresh),
                  random_closed_qbf(rng, bound, depth - 1, qbudget, fresh));
    default: {
      --qbudget;
      // Shadow an existing name occasionally to exercise renaming.
      std::string v = (!bound.empty() && pick(rng, 3) == 0)
                          ? bound[pick(rng, static_cast<int>(bound.size()))]
                          : "x" + std::to_string(fresh++);
      bound.push_back(v);
      QbfPtr body = random_closed_qbf(rng, bound, depth - 1, qbudget, fresh);
      bound.pop_back();
      return c == 6 ? qforall(v, body) : qexists(v, body);
    }
  }
}

}  // namespace

SuiteReport run_hardness_suite(std::uint64_t seed, int samples) {
  SuiteReport r{"hardness", 0, 0, {}, {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    std::vector<std::string> bound;
    int qbudget = 4, fresh = 0;
    QbfPtr tau = random_closed_qbf(rng, bound, 4, qbudget, fresh);
    bool direct = eval_qbf(tau);
    FormulaPtr t = encode_hardness(tau);
    bool reduced = model_check(t, {}, State({}, {}), nullptr);
    r.tally(direct == reduced,
            "hardness divergence on t = " + render_formula(t), "hardness");
  }
  return r;
}

SuiteReport run_context_stability_suite(std::uint64_t seed, int samples) {
  SuiteReport r{"context-stability", 0, 0, {}, {}};
  std::mt19937_64 rng(seed);
  std::vector<std::string> atoms3{"a", "b", "c"};
  int attempts = 0, cap = samples * 30;
  while (r.passed + r.failed < samples && attempts++ < cap) {
    FormulaPtr psi;
    for (int t = 0; t < 20; ++t) {
      psi = random_cond(rng, atoms3, 3, 1);
      if (is_unnested(psi)) break;
      psi = nullptr;
    }
    if (!psi) continue;
    int nb = pick(rng, 3);
    std::vector<FormulaPtr> base;
    for (int j = 0; j < nb; ++j) base.push_back(random_prop(rng, atoms3, 2));
    std::set<std::string> val;
    bool ok = false;
    for (int t = 0; t < 24 && !ok; ++t) {
      val.clear();
      for (const auto& a : atoms3)
        if (pick(rng, 2)) val.insert(a);
      ok = true;
      for (const auto& bf : base)
        if (!eval_prop(bf, val)) {
          ok = false;
          break;
        }
    }
    if (!ok) continue;
    State anchor(base, val);
    std::vector<FormulaPtr> g1 = base;
    for (const auto& d : delta_bodies(psi)) {
      bool dup = false;
      for (const auto& g : g1)
        if (equal(d, g)) dup = true;
      if (!dup) g1.push_back(d);
    }
    std::vector<std::string> wide{"a", "b", "c", "d"};
    std::vector<FormulaPtr> g2 = g1;
    g2.push_back(random_prop(rng, wide, 2));
    std::vector<FormulaPtr> g3 = g2;
    g3.push_back(random_prop(rng, wide, 2));
    bool v1 = model_check(psi, g1, anchor);
    bool v2 = model_check(psi, g2, anchor);
    bool v3 = model_check(psi, g3, anchor);
    r.tally(v1 == v2 && v2 == v3,
            "context-stability failure on psi=" + render_formula(psi));
  }
  return r;
}

SuiteReport run_cause_encoding_suite(std::uint64_t seed, int samples) {
  SuiteReport r{"cause-encoding", 0, 0, {}, {}};
  {
    EquationalState s = suzy_state();
    Term st{{"st", true}}, bt{{"bt", true}};
    bool a = eval_qbf(encode_actual_cause(st, atom("bs"), s));
    bool b = eval_qbf(encode_actual_cause(bt, atom("bs"), s));
    r.tally(a == is_actual_cause(s, st, atom("bs")) && a,
            "cause-encoding wrong on the st query");
    r.tally(b == is_actual_cause(s, bt, atom("bs")) && !b,
            "cause-encoding wrong on the bt query");
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    EquationalState s = random_equational_state(rng, 4, 2, 3);
    auto [endo, exo] = classify_variables(s);
    std::vector<std::string> ev(endo.begin(), endo.end());
    int k = 1 + pick(rng, std::min<int>(2, static_cast<int>(ev.size())));
    Term lambda;
    for (int j = 0; j < k; ++j) {
      const std::string& a = ev[pick(rng, static_cast<int>(ev.size()))];
      lambda[a] = s.valuation.count(a) != 0;
    }
    if (pick(rng, 6) == 0) {
      auto it = lambda.begin();
      it->second = !it->second;
    }
    std::set<std::string> batoms = base_atoms_of(s);
    std::vector<std::string> bv(batoms.begin(), batoms.end());
    std::vector<std::string> opool;
    int na = 1 + pick(rng, std::min<int>(3, static_cast<int>(bv.size())));
    for (int j = 0; j < na; ++j)
      opool.push_back(bv[pick(rng, static_cast<int>(bv.size()))]);
    std::sort(opool.begin(), opool.end());
    opool.erase(std::unique(opool.begin(), opool.end()), opool.end());
    FormulaPtr omega = random_prop(rng, opool, 2);
    bool direct = is_actual_cause(s, lambda, omega);
    bool encoded = eval_qbf(encode_actual_cause(lambda, omega, s));
    r.tally(direct == encoded, "cause-encoding divergence @ sample " + std::to_string(i) +
                                   " " + describe_eqs(s) +
                                   " lambda=" + render_term(lambda) +
                                   " omega=" + render_formula(omega));
  }
  return r;
}

}  // namespace ctrfact
