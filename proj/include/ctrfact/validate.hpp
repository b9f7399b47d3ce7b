#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ctrfact/causal.hpp"
#include "ctrfact/checker.hpp"

namespace ctrfact {

// Outcome of one property suite: counts of passed and failed checks plus a
// few failure descriptions for diagnosis.
struct SuiteReport {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> details;
  // Per-check-kind (passed, failed) counters, for reporting sub-results of a
  // suite that bundles several independent properties.
  std::map<std::string, std::pair<int, int>> kinds;

  bool ok() const { return failed == 0 && passed > 0; }
  bool kind_ok(const std::string& kind) const {
    auto it = kinds.find(kind);
    return it != kinds.end() && it->second.second == 0 && it->second.first > 0;
  }
  void tally(bool good, const std::string& what, const std::string& kind = "") {
    if (good) {
      ++passed;
      if (!kind.empty()) ++kinds[kind].first;
    } else {
      ++failed;
      if (!kind.empty()) ++kinds[kind].second;
      if (details.size() < 8) details.push_back(what);
    }
  }
};

// Random equational state with an acyclic dependency graph: equation bodies
// draw only on variables earlier in a fixed topological order, and the
// valuation is solved from random exogenous values (hence compatible).
EquationalState random_equational_state(std::mt19937_64& rng, int max_endo,
                                        int max_exo, int max_body_atoms);

// The rock-throwing fixture: five equations over sd, bd, st, bt, sh, bh, bs.
EquationalState suzy_state();

// Validities (1)-(7): exhaustive search over small contexts plus `samples`
// seeded random models per validity, the weak/strong centering witness, and
// a bounded search for a rational-monotonicity countermodel.
SuiteReport run_validity_suite(std::uint64_t seed, int samples);

// Random DAG instances: but-condition against its literal all-successors
// form, against the might-counterfactual disjunction, post-intervention
// uniqueness, and the cause definition against its counterfactual form.
SuiteReport run_causal_suite(std::uint64_t seed, int samples);

// Brute-force checking against the QBF encoding on random instances.
SuiteReport run_qbf_mc_suite(std::uint64_t seed, int samples);

// QBF evaluation against checking the reduced formula in the empty context.
SuiteReport run_hardness_suite(std::uint64_t seed, int samples);

// Verdict stability of unnested formulas under growing the vocabulary.
SuiteReport run_context_stability_suite(std::uint64_t seed, int samples);

// The cause QBF encoding against the interventionist definition.
SuiteReport run_cause_encoding_suite(std::uint64_t seed, int samples);

}  // namespace ctrfact
