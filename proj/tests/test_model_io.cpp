#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "ctrfact/checker.hpp"
#include "ctrfact/model_io.hpp"

using namespace ctrfact;

namespace {

std::string models_dir() {
#ifdef CTRFACT_MODELS_DIR
  return CTRFACT_MODELS_DIR;
#else
  return "models";
#endif
}

}  // namespace

TEST_CASE("plain models load with every optional field honored") {
  ModelFile m = parse_model(R"({
    "gamma": ["p -> q", "r"],
    "base": ["p -> q"],
    "valuation": ["p", "q"],
    "sigma_extra": ["s"],
    "constraint": "~r | q"
  })");
  CHECK_FALSE(m.equational);
  REQUIRE(m.gamma.size() == 2);
  CHECK(render_formula(m.gamma[0]) == "p -> q");
  REQUIRE(m.base_.size() == 1);
  CHECK(m.valuation == std::set<std::string>{"p", "q"});
  CHECK(m.sigma_extra == std::set<std::string>{"s"});
  CHECK(render_formula(m.constraint) == "~r | q");

  Context ctx = model_context(m, parse_formula("p []-> q"));
  CHECK(ctx.sigma == std::set<std::string>{"p", "q", "r", "s"});
  State s = model_state(m, ctx);
  CHECK(s.valuation == std::set<std::string>{"p", "q"});
  REQUIRE(s.base.size() == 1);
}

TEST_CASE("equational models expose both views") {
  ModelFile m = parse_model(R"({
    "equations": {"e": "u | v", "f": "e"},
    "valuation": ["u", "e", "f"]
  })");
  CHECK(m.equational);
  EquationalState es = model_equational(m);
  CHECK(es.valuation == std::set<std::string>{"u", "e", "f"});
  CHECK(render_formula(es.equations.at("e")) == "u | v");

  // The derived context: the base equations as gamma, plus any base-
  // membership bodies the query mentions, with sigma covering the query.
  FormulaPtr psi = parse_formula("D(g <-> w) | (e []-> f)");
  Context ctx = model_context(m, psi);
  REQUIRE(ctx.gamma.size() == 3);
  CHECK(render_formula(ctx.gamma[0]) == "e <-> u | v");
  CHECK(render_formula(ctx.gamma[1]) == "f <-> e");
  CHECK(render_formula(ctx.gamma[2]) == "g <-> w");
  for (const auto& a : {"e", "f", "u", "v", "g", "w"})
    CHECK(ctx.sigma.count(a) == 1);

  State s = model_state(m, ctx);
  CHECK(s.valuation == es.valuation);
  CHECK(s.base.size() == 2);  // only the model's own equations
}

TEST_CASE("field-level diagnostics name the offending field") {
  auto thrown = [](const std::string& text) {
    try {
      parse_model(text);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(thrown("[1, 2]").find("JSON object") != std::string::npos);
  CHECK(thrown("{\"valuation\": []}").find("gamma") != std::string::npos);
  CHECK(thrown(R"({"gamma": ["p ->"], "base": [], "valuation": []})")
            .find("gamma[0]") != std::string::npos);
  CHECK(thrown(R"({"gamma": ["p"], "base": [], "valuation": [3]})")
            .find("valuation[0]") != std::string::npos);
  CHECK(thrown(R"({"gamma": ["p"], "base": [], "valuation": [], "bogus": 1})")
            .find("bogus") != std::string::npos);
  CHECK(thrown(R"({"equations": {"p": "p | q"}, "valuation": []})")
            .find("equations") != std::string::npos);
}

TEST_CASE("the base must repeat gamma members verbatim") {
  CHECK_THROWS_WITH_AS(
      parse_model(R"({
        "gamma": ["p -> q"],
        "base": ["~p | q"],
        "valuation": ["q"]
      })"),
      doctest::Contains("base"), std::runtime_error);
}

TEST_CASE("incompatible valuations are rejected at parse time") {
  CHECK_THROWS_WITH_AS(parse_model(R"({
    "gamma": ["p -> q"],
    "base": ["p -> q"],
    "valuation": ["p"]
  })"),
                       doctest::Contains("valuation"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_model(R"({"equations": {"e": "u"}, "valuation": ["e"]})"),
      doctest::Contains("equations"), std::runtime_error);
}

TEST_CASE("cause analysis needs the equational shape") {
  ModelFile m = parse_model(
      R"({"gamma": ["p"], "base": [], "valuation": []})");
  CHECK_THROWS_WITH_AS(model_equational(m), doctest::Contains("equational"),
                       std::runtime_error);
}

TEST_CASE("load_model prefixes the path and reads the shipped fixtures") {
  CHECK_THROWS_WITH_AS(load_model("/nonexistent/x.json"),
                       doctest::Contains("/nonexistent/x.json"),
                       std::runtime_error);

  ModelFile suzy = load_model(models_dir() + "/suzy.json");
  CHECK(suzy.equational);
  EquationalState es = model_equational(suzy);
  CHECK(es.valuation.count("bs") == 1);
  CHECK(is_actual_cause(es, Term{{"st", true}}, parse_prop("bs")));

  ModelFile game = load_model(models_dir() + "/videogame.json");
  CHECK_FALSE(game.equational);
  FormulaPtr psi = parse_formula("(ac3 <>-> ju) & ((ac3 & D(ac3 -> ju)) []-> ju)");
  Context ctx = model_context(game, psi);
  State s = model_state(game, ctx);
  CHECK(satisfies(s, ctx, psi));
}
