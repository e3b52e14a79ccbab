#include "cdl/config.hpp"
#include "cdl/model.hpp"
#include "cdl/parser.hpp"
#include "doctest.h"

using namespace cdl;

namespace {

StateSet S(std::size_t n, std::initializer_list<std::size_t> ids) { return StateSet::from_indices(n, ids); }

DynamicModel two_state_pdl() {
  DynamicModel m;
  m.config = shipped_config("pdl");
  m.states = {"s0", "s1"};
  m.valuation["p"] = S(2, {1});
  m.actions["a"] = KleisliArrow{2, {TValue::pow(S(2, {1})), TValue::pow(S(2, {}))}};
  return m;
}

Formula F(const std::string& text, const InstanceConfig& c) { return parse_formula(text, c.signature()); }

// Random formulas over p, q and actions a, b of bounded depth.
Action random_action(std::mt19937_64& rng, int depth, const InstanceConfig& c);

Formula random_formula(std::mt19937_64& rng, int depth, const InstanceConfig& c) {
  const unsigned pick = depth <= 0 ? rng() % 3 : rng() % 7;
  switch (pick) {
    case 0: return prop("p");
    case 1: return prop("q");
    case 2: return rng() % 4 == 0 ? top() : prop("p");
    case 3: return neg(random_formula(rng, depth - 1, c));
    case 4: return conj(random_formula(rng, depth - 1, c), random_formula(rng, depth - 1, c));
    case 5: return disj(random_formula(rng, depth - 1, c), random_formula(rng, depth - 1, c));
    default: return dia(random_action(rng, depth - 1, c), random_formula(rng, depth - 1, c));
  }
}

Action random_action(std::mt19937_64& rng, int depth, const InstanceConfig& c) {
  const unsigned pick = depth <= 0 ? rng() % 2 : rng() % 6;
  switch (pick) {
    case 0: return act("a");
    case 1: return act("b");
    case 2: return seq(random_action(rng, depth - 1, c), random_action(rng, depth - 1, c));
    case 3: return star(random_action(rng, depth - 1, c));
    case 4: return test(random_formula(rng, depth - 1, c));
    default: {
      if (c.operations.empty()) return act("a");
      const std::string& sym = c.operations[rng() % c.operations.size()];
      return op(sym, {random_action(rng, depth - 1, c), random_action(rng, depth - 1, c)});
    }
  }
}

}  // namespace

TEST_CASE("shipped configs pass their standing assumptions") {
  for (const auto& name : shipped_config_names()) {
    CAPTURE(name);
    const ValidationReport r = validate_config(shipped_config(name));
    CHECK(r.ok);
    for (const auto& p : r.problems) MESSAGE(p);
    CHECK_NOTHROW(load_config(name));
  }
  CHECK(shipped_config("pdl").signature().contains("+"));
  CHECK_FALSE(shipped_config("pdl").signature().contains("^"));
  CHECK(shipped_config("gl-cap").signature().contains("^"));
  CHECK(shipped_config("fpdl").experimental);
  CHECK_THROWS_AS(shipped_config("nope"), ConfigError);
}

TEST_CASE("config files") {
  const InstanceConfig gl = shipped_config("gl-cap");
  const InstanceConfig back = config_from_json(config_to_json(gl));
  CHECK(config_to_json(back) == config_to_json(gl));

  CHECK_THROWS_AS(config_from_json(R"({"name": "x", "monad": "Pow", "colour": "red"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"name": "x", "monad": "Powerset"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"name": "x"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);

  InstanceConfig c = shipped_config("pdl");
  apply_budget_json(c, R"({"law_samples": 77, "closure_pairs": 12})");
  CHECK(c.budgets.law_samples == 77);
  CHECK(c.budgets.closure_pairs == 12);
  CHECK(c.law_budget().samples == 77);
  CHECK_THROWS_AS(apply_budget_json(c, R"({"speed": 1})"), ConfigError);
  CHECK_THROWS_AS(apply_budget_json(c, R"({"atoms": -1})"), ConfigError);
}

TEST_CASE("configs violating the standing assumptions are rejected") {
  // Box-primary: the Kripke box declared as such.
  const InstanceConfig box =
      config_from_json(R"({"name": "box", "monad": "Pow", "lifting": "kripke-box", "polarity": "box"})");
  CHECK_FALSE(validate_config(box).ok);
  CHECK_THROWS_AS(require_valid(box), ConfigError);

  // Declared diamond-like but classified neither.
  const InstanceConfig nonempty =
      config_from_json(R"({"name": "ne", "monad": "Pow", "lifting": "nonempty-subset"})");
  CHECK_FALSE(validate_config(nonempty).ok);

  // Diamond-like but the unit square fails.
  const InstanceConfig empty = config_from_json(R"({"name": "e", "monad": "Pow", "lifting": "constant-empty"})");
  const ValidationReport r = validate_config(empty);
  CHECK_FALSE(r.ok);
  bool morphism_failed = false;
  for (const auto& p : r.problems) morphism_failed = morphism_failed || p.find("transpose-morphism") != std::string::npos;
  CHECK(morphism_failed);

  // Monotone neighbourhoods under intersection are box-like.
  CHECK_FALSE(validate_config(config_from_json(
                                  R"({"name": "x", "monad": "MonNbhd", "join": "intersection", "lifting": "neighbourhood"})"))
                  .ok);
  // Operations the monad lacks.
  CHECK_FALSE(validate_config(config_from_json(R"({"name": "x", "monad": "Pow", "operations": ["^"]})")).ok);
  CHECK_FALSE(validate_config(config_from_json(R"({"name": "x", "monad": "Pow", "join": "upset"})")).ok);
}

TEST_CASE("evaluating programs") {
  DynamicModel m = two_state_pdl();
  const KleisliArrow s = eval_action(m, parse_action("a*"));
  CHECK(s(0) == TValue::pow(S(2, {0, 1})));
  CHECK(s(1) == TValue::pow(S(2, {1})));
  CHECK(eval_action(m, parse_action("?false")) == bottom_arrow(pow_monad(), 2));
  CHECK(eval_action(m, parse_action("?p")) ==
        KleisliArrow{2, {TValue::pow(S(2, {})), TValue::pow(S(2, {1}))}});
  CHECK_THROWS_AS(eval_action(m, parse_action("b")), ModelError);
  CHECK_THROWS_AS(eval_action(m, parse_action("a ^ a")), ModelError);

  // Componentwise intersection of upsets.
  DynamicModel g;
  g.config = shipped_config("gl-cap");
  g.states = {"s0", "s1"};
  g.actions["a"] = KleisliArrow{2, {TValue::mon_nbhd({S(2, {0})}, 2), TValue::mon_nbhd({S(2, {0})}, 2)}};
  g.actions["b"] = KleisliArrow{2, {TValue::mon_nbhd({S(2, {1})}, 2), TValue::mon_nbhd({S(2, {1})}, 2)}};
  const KleisliArrow both = eval_action(g, parse_action("a ^ b"));
  CHECK(both(0) == TValue::mon_nbhd({S(2, {0, 1})}, 2));
  CHECK(both(1) == TValue::mon_nbhd({S(2, {0, 1})}, 2));
}

TEST_CASE("evaluating formulas") {
  DynamicModel m = two_state_pdl();
  const auto& c = m.config;
  CHECK(eval_formula(m, F("<a>p", c)) == S(2, {0}));
  CHECK(eval_formula(m, F("<a*>p", c)) == S(2, {0, 1}));
  CHECK(eval_formula(m, F("[a]p", c)) == S(2, {0, 1}));
  CHECK(eval_formula(m, F("unbound", c)) == S(2, {}));
  CHECK(eval_formula(m, F("true", c)).all());
  CHECK(check_axiom_validity(m, F("true", c)));
  CHECK_FALSE(check_axiom_validity(m, F("p", c)));

  Evaluator ev(m);
  ev.assume(prop("p"), S(2, {0}));
  CHECK(ev.eval(F("<a>p", c)) == S(2, {}));
  CHECK(ev.eval(F("p", c)) == S(2, {0}));
}

TEST_CASE("frame identities hold on random models of every config") {
  for (const auto& name : shipped_config_names()) {
    CAPTURE(name);
    const InstanceConfig c = shipped_config(name);
    std::mt19937_64 rng(11);
    int failures = 0;
    for (int trial = 0; trial < 150; ++trial) {
      const DynamicModel m = random_model(c, 1 + rng() % 3, {"p", "q"}, {"a", "b"}, rng);
      const Action alpha = random_action(rng, 2, c);
      const Formula psi = random_formula(rng, 1, c);
      const Formula phi = random_formula(rng, 2, c);
      Evaluator ev(m);
      const std::size_t n = m.size();
      // Boolean clauses.
      failures += !(ev.eval(neg(phi)) == ev.eval(phi).complement());
      failures += !(ev.eval(conj(phi, psi)) == (ev.eval(phi) & ev.eval(psi)));
      // Star, test and composition identities.
      failures += !(ev.eval(dia(star(alpha), psi)) == ev.eval(disj(psi, dia(alpha, dia(star(alpha), psi)))));
      failures += !(ev.eval(dia(test(phi), psi)) == ev.eval(conj(phi, psi)));
      failures += !(ev.eval(dia(seq(alpha, act("a")), psi)) == ev.eval(dia(alpha, dia(act("a"), psi))));
      // Monotonicity of the modality.
      failures += !ev.eval(implies(dia(alpha, conj(phi, psi)), dia(alpha, phi))).all();
      // Bottom successors never satisfy a diamond.
      const KleisliArrow f = ev.eval(alpha);
      const StateSet d = ev.eval(dia(alpha, phi));
      for (std::size_t x = 0; x < n; ++x)
        if (f(x) == ev.monad().bottom(n)) failures += d.test(x);
      // Memoisation is invisible.
      failures += !(eval_formula(m, phi) == ev.eval(phi));
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("K fails on a two-state monotone neighbourhood model") {
  // p = {s0}, q = {}; both states have the single neighbourhood {s0, s1}.
  // Then [a](p -> q) and [a]p hold ({s0} and {s1} are not neighbourhoods)
  // but [a]q fails (the whole carrier is one).
  DynamicModel m;
  m.config = shipped_config("gl");
  m.states = {"s0", "s1"};
  m.valuation["p"] = S(2, {0});
  m.valuation["q"] = S(2, {});
  const TValue whole = TValue::mon_nbhd({S(2, {0, 1})}, 2);
  m.actions["a"] = KleisliArrow{2, {whole, whole}};
  const Formula k = F("[a](p -> q) -> [a]p -> [a]q", m.config);
  CHECK(eval_formula(m, k) == S(2, {}));
  CHECK_FALSE(check_axiom_validity(m, k));

  // The same formula is valid on every random Kripke model.
  std::mt19937_64 rng(3);
  const InstanceConfig pdl = shipped_config("pdl");
  for (int i = 0; i < 200; ++i)
    CHECK(check_axiom_validity(random_model(pdl, 1 + rng() % 3, {"p", "q"}, {"a"}, rng), k));
}

TEST_CASE("star rule preservation") {
  const DynamicModel m = two_state_pdl();
  const auto& c = m.config;
  // Premise invalid: <a>p | p -> false fails at s1.
  CHECK(check_star_rule_preservation(m, act("a"), prop("p"), bot()));
  // psi = <a*>p is an invariant containing p.
  CHECK(check_star_rule_preservation(m, act("a"), prop("p"), F("<a*>p", c)));
  CHECK(check_axiom_validity(m, implies(disj(dia(act("a"), F("<a*>p", c)), prop("p")), F("<a*>p", c))));

  for (const auto& name : shipped_config_names()) {
    CAPTURE(name);
    const InstanceConfig cfg = shipped_config(name);
    std::mt19937_64 rng(29);
    int failures = 0, premises = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const DynamicModel r = random_model(cfg, 1 + rng() % 3, {"p", "q"}, {"a", "b"}, rng);
      const Action alpha = random_action(rng, 1, cfg);
      const Formula phi = random_formula(rng, 1, cfg);
      const Formula psi = random_formula(rng, 2, cfg);
      premises += check_axiom_validity(r, implies(disj(dia(alpha, psi), phi), psi));
      failures += !check_star_rule_preservation(r, alpha, phi, psi);
    }
    CHECK(failures == 0);
    CHECK(premises > 0);
  }
}

TEST_CASE("coherence") {
  const InstanceConfig pdl = shipped_config("pdl");
  const Closure cl = fl_closure(F("<a>p", pdl), pdl.signature());
  REQUIRE(cl.pair_count() == 2);
  const std::size_t p_pair = cl.literal_of(prop("p")).pair;
  StateSet diamond_only(2), p_only(2);
  diamond_only.set(0);
  p_only.set(p_pair);

  // One atom without <a>p, bottom successor.
  DynamicModel single;
  single.config = pdl;
  single.states = {"g0"};
  single.valuation["p"] = S(1, {0});
  single.actions["a"] = KleisliArrow{1, {TValue::pow(S(1, {}))}};
  CHECK(check_coherence(single, cl, {p_only}).ok());

  // g0 = {<a>p, ~p} -> g1 = {~<a>p, p}.
  DynamicModel two;
  two.config = pdl;
  two.states = {"g0", "g1"};
  two.valuation["p"] = S(2, {1});
  two.actions["a"] = KleisliArrow{2, {TValue::pow(S(2, {1})), TValue::pow(S(2, {}))}};
  CHECK(check_coherence(two, cl, {diamond_only, p_only}).ok());

  // Flip the edge of g0 onto itself.
  two.actions["a"].table[0] = TValue::pow(S(2, {0}));
  const CoherenceReport bad = check_coherence(two, cl, {diamond_only, p_only});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.front() == "state g0: <a>p unfulfilled");

  CHECK_THROWS_AS(check_coherence(two, cl, {diamond_only}), ModelError);
}

TEST_CASE("model files") {
  const char* text = R"({
    "config": "gl",
    "states": ["x", "y"],
    "valuation": {"p": ["y"]},
    "actions": {"a": {"x": [["y"]], "y": [["x"], ["x", "y"]]}}
  })";
  const DynamicModel m = model_from_json(text);
  CHECK(m.generators);
  CHECK(m.size() == 2);
  CHECK(m.actions.at("a")(0) == TValue::mon_nbhd({S(2, {1})}, 2));
  // Generators are minimised on ingestion.
  CHECK(m.actions.at("a")(1).family() == Family{S(2, {0})});
  CHECK(eval_formula(m, parse_formula("<a>p")) == S(2, {0}));

  const DynamicModel back = model_from_json(model_to_json(m));
  CHECK(back.states == m.states);
  CHECK(back.valuation == m.valuation);
  CHECK(back.actions == m.actions);

  // Missing entries denote bottom.
  const DynamicModel partial = model_from_json(R"({"config": "pdl", "states": ["s"], "actions": {"a": {}}})");
  CHECK(partial.actions.at("a")(0) == TValue::pow(S(1, {})));

  CHECK_THROWS_AS(model_from_json(R"({"config": "pdl", "states": ["s"], "extra": 1})"), ModelError);
  CHECK_THROWS_AS(model_from_json(R"({"config": "pdl", "states": ["s"], "valuation": {"p": ["t"]}})"), ModelError);
  CHECK_THROWS_AS(model_from_json(R"({"config": "pdl", "states": ["s", "s"]})"), ModelError);
  CHECK_THROWS_AS(model_from_json(R"({"config": "nowhere.json", "states": ["s"]})"), ConfigError);
  CHECK_THROWS_AS(model_from_json(R"({"config": "pdl", "states": ["s"], "actions": {"a": {"s": [["s"]]}}})"),
                  ModelError);

  const DynamicModel filter =
      model_from_json(R"({"config": "fpdl", "states": ["s", "t"], "actions": {"a": {"s": ["t"]}}})");
  CHECK(filter.actions.at("a")(0) == TValue::filter(S(2, {1})));
  CHECK(filter.actions.at("a")(1) == TValue::filter(S(2, {})));
}
