#include <doctest.h>

#include <random>

#include "ctrfact/checker.hpp"  // random_cond
#include "ctrfact/formula.hpp"

using namespace ctrfact;

TEST_CASE("parser precedence and associativity") {
  // ~ binds tightest, then & then | then -> (right) then <-> then the
  // counterfactuals, which are non-associative and loosest.
  CHECK(equal(parse_formula("~p & q"), conj(neg(atom("p")), atom("q"))));
  CHECK(equal(parse_formula("p | q & r"),
              disj(atom("p"), conj(atom("q"), atom("r")))));
  CHECK(equal(parse_formula("p -> q -> r"),
              implies(atom("p"), implies(atom("q"), atom("r")))));
  CHECK(equal(parse_formula("p <-> q <-> r"),
              iff(iff(atom("p"), atom("q")), atom("r"))));
  CHECK(equal(parse_formula("p & q []-> r | s"),
              box(conj(atom("p"), atom("q")), disj(atom("r"), atom("s")))));
  CHECK(equal(parse_formula("p <>-> q"), diamond(atom("p"), atom("q"))));
  // Non-associative conditionals: chaining without parentheses is an error.
  CHECK_THROWS_AS(parse_formula("p []-> q []-> r"), ParseError);
  CHECK(equal(parse_formula("p []-> (q []-> r)"),
              box(atom("p"), box(atom("q"), atom("r")))));
}

TEST_CASE("constants and the D connective") {
  CHECK(parse_formula("true")->kind == Kind::Top);
  CHECK(parse_formula("false")->kind == Kind::Bot);
  FormulaPtr d = parse_formula("D(p -> q)");
  CHECK(d->kind == Kind::Delta);
  CHECK(equal(d->left, implies(atom("p"), atom("q"))));
  // D immediately applied to a group is the connective; bare D is an atom.
  CHECK(parse_formula("D")->kind == Kind::Atom);
  CHECK(equal(parse_formula("D & p"), conj(atom("D"), atom("p"))));
  // D bodies must be propositional.
  CHECK_THROWS(parse_formula("D(p []-> q)"));
  // parse_prop rejects every modal construct.
  CHECK_THROWS(parse_prop("D(p)"));
  CHECK_THROWS(parse_prop("p []-> q"));
  CHECK(equal(parse_prop("p -> q"), implies(atom("p"), atom("q"))));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("p &");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col > 1);
  }
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
}

TEST_CASE("render and reparse is structural identity") {
  std::mt19937_64 rng(7);
  std::vector<std::string> atoms{"p", "q", "r", "s"};
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = random_cond(rng, atoms, 3, 2);
    FormulaPtr back = parse_formula(render_formula(f));
    CHECK(equal(f, back));
  }
}

TEST_CASE("structural order is a total order consistent with equal") {
  std::mt19937_64 rng(11);
  std::vector<std::string> atoms{"p", "q"};
  for (int i = 0; i < 200; ++i) {
    FormulaPtr a = random_cond(rng, atoms, 2, 1);
    FormulaPtr b = random_cond(rng, atoms, 2, 1);
    FormulaPtr c = random_cond(rng, atoms, 2, 1);
    CHECK(equal(a, b) == (compare(a, b) == 0));
    CHECK(compare(a, b) == -compare(b, a));
    if (compare(a, b) <= 0 && compare(b, c) <= 0) CHECK(compare(a, c) <= 0);
  }
}

TEST_CASE("atom names") {
  CHECK(is_valid_atom_name("p_1"));
  CHECK(is_valid_atom_name("_x"));
  CHECK_FALSE(is_valid_atom_name("1p"));
  CHECK_FALSE(is_valid_atom_name(""));
  CHECK_FALSE(is_valid_atom_name("true"));
  CHECK_FALSE(is_valid_atom_name("false"));
  CHECK_THROWS(atom("true"));
  CHECK_THROWS(atom("a b"));
}

TEST_CASE("classification predicates") {
  CHECK(is_propositional(parse_formula("p & (q -> r)")));
  CHECK_FALSE(is_propositional(parse_formula("D(p)")));
  CHECK_FALSE(is_propositional(parse_formula("p []-> q")));
  // Unnested: no conditional inside a conditional; D anywhere is fine.
  CHECK(is_unnested(parse_formula("(p []-> q) & (r <>-> s)")));
  CHECK(is_unnested(parse_formula("D(p) []-> q & D(r)")));
  CHECK_FALSE(is_unnested(parse_formula("p []-> (q <>-> r)")));
  CHECK_FALSE(is_unnested(parse_formula("(p <>-> q) []-> r")));
}

TEST_CASE("atoms_of and delta_bodies") {
  FormulaPtr f = parse_formula("D(p -> q) & (r []-> D(p -> q) | D(s))");
  CHECK(atoms_of(f) == std::set<std::string>{"p", "q", "r", "s"});
  auto bodies = delta_bodies(f);
  REQUIRE(bodies.size() == 2);  // duplicates collapse
  bool saw_imp = false, saw_s = false;
  for (const auto& b : bodies) {
    if (equal(b, implies(atom("p"), atom("q")))) saw_imp = true;
    if (equal(b, atom("s"))) saw_s = true;
  }
  CHECK(saw_imp);
  CHECK(saw_s);
}

TEST_CASE("terms") {
  Term t{{"a", true}, {"b", false}};
  CHECK(render_term(t) == "a & ~b");
  CHECK(render_term(Term{}) == "true");
  Term nt = negate_term(t);
  CHECK(nt == Term{{"a", false}, {"b", true}});
  CHECK(negate_term(nt) == t);
  CHECK(equal(term_formula(t), conj(atom("a"), neg(atom("b")))));
  CHECK(term_formula(Term{})->kind == Kind::Top);

  CHECK(term_holds(t, {"a"}));
  CHECK_FALSE(term_holds(t, {"a", "b"}));
  CHECK(term_holds(Term{}, {}));

  CHECK(is_strict_subterm(Term{{"a", true}}, t));
  CHECK(is_strict_subterm(Term{}, t));
  CHECK_FALSE(is_strict_subterm(t, t));
  CHECK_FALSE(is_strict_subterm(Term{{"a", false}}, t));  // sign must match
}

TEST_CASE("enumerate_terms order and bound") {
  auto ts = enumerate_terms({"a", "b"});
  REQUIRE(ts.size() == 4);
  // All positive first; the smallest atom's sign flips fastest.
  CHECK(ts[0] == Term{{"a", true}, {"b", true}});
  CHECK(ts[1] == Term{{"a", false}, {"b", true}});
  CHECK(ts[2] == Term{{"a", true}, {"b", false}});
  CHECK(ts[3] == Term{{"a", false}, {"b", false}});

  auto empty = enumerate_terms({});
  REQUIRE(empty.size() == 1);  // the empty term, standing for true
  CHECK(empty[0].empty());

  std::set<std::string> big;
  for (int i = 0; i < 13; ++i) big.insert("v" + std::to_string(i));
  CHECK_THROWS_AS(enumerate_terms(big), BoundError);
}

TEST_CASE("equational formulas") {
  EquationalFormula eq("p", parse_prop("q | r"));
  CHECK(equal(eq.as_iff(), iff(atom("p"), disj(atom("q"), atom("r")))));
  CHECK_THROWS(EquationalFormula("p", parse_prop("p | q")));  // head in body
}

TEST_CASE("parse_term inverts render_term") {
  CHECK(parse_term("a & ~b") == Term{{"a", true}, {"b", false}});
  CHECK(parse_term("~b & a") == Term{{"a", true}, {"b", false}});
  CHECK(parse_term("true").empty());
  for (const Term& t : enumerate_terms({"x", "y", "z"}))
    CHECK(parse_term(render_term(t)) == t);
  CHECK_THROWS_AS(parse_term("a | b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("a & ~a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("a & (b -> c)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term("a &"), ParseError);
}
