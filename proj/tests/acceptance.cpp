// Acceptance gate: one self-contained check per shipped guarantee, each
// printing a single PASS/FAIL line (plus indented diagnostics on failure).
// Run with a criterion number (1-10) to check just that one, or with no
// arguments for the full gate. Exits 0 only if every requested criterion
// passed.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "ctrfact/model_io.hpp"
#include "ctrfact/qbf.hpp"
#include "ctrfact/validate.hpp"

using namespace ctrfact;

namespace {

#ifndef CTRFACT_MODELS_DIR
#define CTRFACT_MODELS_DIR "models"
#endif

constexpr std::uint64_t kSeed = 42;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void emit(int n, bool pass, const std::string& what) {
  std::printf("criterion %d: %s — %s\n", n, pass ? "PASS" : "FAIL",
              what.c_str());
}

void emit_details(const SuiteReport& r, std::size_t cap = 3) {
  for (std::size_t i = 0; i < r.details.size() && i < cap; ++i)
    std::printf("    %s\n", r.details[i].c_str());
}

std::string kinds_of(const SuiteReport& r) {
  std::string out;
  for (const auto& [k, pf] : r.kinds) {
    if (!out.empty()) out += ", ";
    out += k + " " + std::to_string(pf.first) + "/" +
           std::to_string(pf.first + pf.second);
  }
  return out;
}

std::size_t formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->left) + formula_size(f->right);
}

// 1. The two-thrower story: the first throw and not the preempted second
// one causes the shattering, on both decision routes, in under 5 seconds.
bool criterion_1() {
  Timer t;
  EquationalState s =
      model_equational(load_model(std::string(CTRFACT_MODELS_DIR) + "/suzy.json"));
  FormulaPtr bs = parse_prop("bs");
  Term st{{"st", true}}, bt{{"bt", true}};
  bool i_st = is_actual_cause(s, st, bs);
  bool c_st = actual_cause_via_counterfactuals(s, st, bs);
  bool i_bt = is_actual_cause(s, bt, bs);
  bool c_bt = actual_cause_via_counterfactuals(s, bt, bs);
  double dt = t.secs();
  bool pass = i_st && c_st && !i_bt && !c_bt && dt < 5.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "first throw %s/%s, second throw %s/%s across the two routes "
                "(%.2f s < 5 s)",
                i_st ? "true" : "false", c_st ? "true" : "false",
                i_bt ? "true" : "false", c_bt ? "true" : "false", dt);
  emit(1, pass, buf);
  return pass;
}

// 2. The platformer example: pressing the third button might trigger the
// jump, and would if the button's rule is kept, in under 2 seconds.
bool criterion_2() {
  Timer t;
  ModelFile m = load_model(std::string(CTRFACT_MODELS_DIR) + "/videogame.json");
  FormulaPtr psi =
      parse_formula("(ac3 <>-> ju) & ((ac3 & D(ac3 -> ju)) []-> ju)");
  Context ctx = model_context(m, psi);
  State s = model_state(m, ctx);
  bool verdict = satisfies(s, ctx, psi);
  double dt = t.secs();
  bool pass = verdict && dt < 2.0;
  char buf[120];
  std::snprintf(buf, sizeof buf, "constrained-context check %s (%.2f s < 2 s)",
                verdict ? "true" : "false", dt);
  emit(2, pass, buf);
  return pass;
}

// 3. The validity suite: seven schemas with zero countermodels exhaustively
// and on 1,000 random models each, the two-closest-states witness, and a
// counterexample to rational monotonicity found by bounded search.
bool criterion_3() {
  Timer t;
  SuiteReport r = run_validity_suite(kSeed, 1000);
  bool pass = r.ok();
  char buf[240];
  std::snprintf(buf, sizeof buf, "%s (seed=%llu, %.2f s)", kinds_of(r).c_str(),
                static_cast<unsigned long long>(kSeed), t.secs());
  emit(3, pass, buf);
  if (!pass) emit_details(r);
  return pass;
}

// 4. Route agreement: the enumeration route and the quantified-boolean
// route give the same verdict on at least 300 random instances.
bool criterion_4() {
  Timer t;
  SuiteReport r = run_qbf_mc_suite(kSeed, 300);
  double dt = t.secs();
  bool pass = r.ok() && r.passed >= 300 && dt < 600.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d/%d agreements (seed=%llu, %.2f s < 600 s)", r.passed,
                r.passed + r.failed, static_cast<unsigned long long>(kSeed),
                dt);
  emit(4, pass, buf);
  if (!pass) emit_details(r);
  return pass;
}

// 5. The hardness reduction: direct evaluation of at least 200 random
// closed quantified formulas matches checking their encodings at the empty
// state, with zero disagreements.
bool criterion_5() {
  Timer t;
  SuiteReport r = run_hardness_suite(kSeed, 200);
  bool pass = r.ok() && r.passed >= 200;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d reductions agree (seed=%llu, %.2f s)",
                r.passed, r.passed + r.failed,
                static_cast<unsigned long long>(kSeed), t.secs());
  emit(5, pass, buf);
  if (!pass) emit_details(r);
  return pass;
}

// 6. Equational-state properties on at least 200 random acyclic instances:
// the intervention-based condition equals its might-counterfactual form,
// the all-successors and unique-successor readings agree, and the
// post-intervention successor is unique.
bool criterion_6() {
  Timer t;
  SuiteReport r = run_causal_suite(kSeed, 200);
  auto total = [&r](const char* k) {
    auto it = r.kinds.find(k);
    return it == r.kinds.end() ? 0 : it->second.first + it->second.second;
  };
  bool pass = r.kind_ok("successor-form") && r.kind_ok("uniqueness") &&
              r.kind_ok("might") && total("might") >= 200;
  char buf[240];
  std::snprintf(buf, sizeof buf, "%s (seed=%llu, %.2f s)", kinds_of(r).c_str(),
                static_cast<unsigned long long>(kSeed), t.secs());
  emit(6, pass, buf);
  if (!pass) {
    std::printf(
        "    note: interventions replace equations but never remove them,\n"
        "    while the similarity order may drop one; on instances where\n"
        "    falsifying the term is cheapest at a state that sheds an\n"
        "    upstream equation, the might-counterfactual form diverges from\n"
        "    the intervention-based condition. See the pinned regression in\n"
        "    the causal unit tests.\n");
    emit_details(r);
  }
  return pass;
}

// 7. Route equivalence for causes: the interventionist definition and the
// one-shot counterfactual form agree on random instances with terms of at
// most two atoms.
bool criterion_7() {
  Timer t;
  SuiteReport r = run_causal_suite(kSeed, 200);
  bool pass = r.kind_ok("cause-route");
  char buf[240];
  std::snprintf(buf, sizeof buf, "%s (seed=%llu, %.2f s)", kinds_of(r).c_str(),
                static_cast<unsigned long long>(kSeed), t.secs());
  emit(7, pass, buf);
  if (!pass) {
    std::printf(
        "    note: same root cause as criterion 6 — the two routes part\n"
        "    ways exactly where the might-form diverges from the\n"
        "    intervention-based condition.\n");
    emit_details(r);
  }
  return pass;
}

// 8. Context stability: verdicts of unnested formulas are unchanged when
// the vocabulary of admissible base formulas grows, on at least 100
// random instances.
bool criterion_8() {
  Timer t;
  SuiteReport r = run_context_stability_suite(kSeed, 100);
  bool pass = r.ok() && r.passed + r.failed >= 100;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d stable (seed=%llu, %.2f s)", r.passed,
                r.passed + r.failed, static_cast<unsigned long long>(kSeed),
                t.secs());
  emit(8, pass, buf);
  if (!pass) emit_details(r);
  return pass;
}

// 9. The cause encoding: the quantified-boolean cause decision agrees with
// the interventionist definition on at least 100 random instances and on
// both throws of the two-thrower story.
bool criterion_9() {
  Timer t;
  SuiteReport r = run_cause_encoding_suite(kSeed, 100);
  bool pass = r.ok();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d agreements (seed=%llu, %.2f s)",
                r.passed, r.passed + r.failed,
                static_cast<unsigned long long>(kSeed), t.secs());
  emit(9, pass, buf);
  if (!pass) {
    std::printf(
        "    note: the encoding realizes the counterfactual route, so it\n"
        "    inherits the criterion-6 divergence against the\n"
        "    interventionist definition on the same instance class.\n");
    emit_details(r);
  }
  return pass;
}

// 10. The complexity classifications themselves are asymptotic claims with
// no desk-scale witness; they are substituted by the agreement suites
// (criteria 4 and 5) plus this concrete size-bound assertion: the checking
// encoding stays within a fixed constant times |psi| * (|sigma| + total
// base size).
bool criterion_10() {
  Timer t;
  constexpr double kBound = 24.0;
  std::mt19937_64 rng(kSeed);
  std::vector<std::string> atoms4{"a", "b", "c", "d"};
  double worst = 0;
  std::size_t biggest = 0;
  int measured = 0;
  for (int i = 0; i < 400; ++i) {
    std::vector<FormulaPtr> gamma;
    int gc = pick(rng, 4);
    for (int g = 0; g < gc; ++g) gamma.push_back(random_prop(rng, atoms4, 2));
    FormulaPtr psi = random_cond(rng, atoms4, 4, 1);
    std::set<std::string> sigma;
    for (const auto& g : gamma)
      for (const auto& a : atoms_of(g)) sigma.insert(a);
    for (const auto& a : atoms_of(psi)) sigma.insert(a);
    std::vector<State> pool;
    try {
      pool = enumerate_context(Context(gamma, sigma, top()));
    } catch (const std::exception&) {
      continue;
    }
    if (pool.empty()) continue;
    State anchor = pool[pick(rng, static_cast<int>(pool.size()))];
    std::size_t sz = qbf_size(encode_mc(psi, gamma, anchor));
    std::size_t gtot = 0;
    for (const auto& g : gamma) gtot += formula_size(g);
    double denom = static_cast<double>(formula_size(psi)) *
                   static_cast<double>(sigma.size() + gtot + 1);
    double ratio = static_cast<double>(sz) / denom;
    if (ratio > worst) worst = ratio;
    if (sz > biggest) biggest = sz;
    ++measured;
  }
  bool pass = measured >= 300 && worst <= kBound;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "size ratio <= %.0f held on %d instances (worst %.1f, largest "
                "encoding %zu nodes, %.2f s); asymptotic classifications "
                "substituted by criteria 4 and 5",
                kBound, measured, worst, biggest, t.secs());
  emit(10, pass, buf);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  bool (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                          criterion_5, criterion_6, criterion_7, criterion_8,
                          criterion_9, criterion_10};
  bool all = true;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      int n = std::atoi(argv[i]);
      if (n < 1 || n > 10) {
        std::fprintf(stderr, "usage: %s [criterion 1-10]...\n", argv[0]);
        return 2;
      }
      all = criteria[n - 1]() && all;
    }
  } else {
    for (auto* c : criteria) all = c() && all;
  }
  return all ? 0 : 1;
}
