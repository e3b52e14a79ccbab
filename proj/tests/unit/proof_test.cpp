#include <functional>
#include <map>
#include <random>

#include "cdl/config.hpp"
#include "cdl/model.hpp"
#include "cdl/parser.hpp"
#include "cdl/proof.hpp"
#include "doctest.h"

using namespace cdl;

namespace {

Formula F(const std::string& text) { return parse_formula(text); }

const char* kCongScript = R"(
# commuting a conjunction under a modality
1. p & q <-> q & p ; taut
2. <a>(p & q) <-> <a>(q & p) ; cong 1
3. (<a>(p & q) <-> <a>(q & p)) -> (<a>(p & q) -> <a>(q & p)) ; taut
4. <a>(p & q) -> <a>(q & p) ; mp 2 3
)";

const char* kMonoScript = R"(
1. <a>(p & q) -> <a>p ; axiom mono
2. <b*>(p & ~q) -> <b*>p ; subst 1 a := b*, q := ~q
)";

const char* kStarScript = R"(
1. <a*>p <-> p | <a><a*>p ; axiom star
2. (<a*>p <-> p | <a><a*>p) -> (<a><a*>p | p -> <a*>p) ; taut
3. <a><a*>p | p -> <a*>p ; mp 1 2
4. <a*>p -> <a*>p ; star 3
)";

const char* kPdlScript = R"(
1. <a + b>p <-> <a>p | <b>p ; axiom pw+
2. <a;b>p <-> <a><b>p ; axiom comp
3. <?q>p <-> q & p ; axiom test
4. ~<c>false ; axiom dia-bot
5. <c>(p | r) <-> <c>p | <c>r ; axiom dia-or
6. <a + b>(p | r) <-> <a>(p | r) | <b>(p | r) ; subst 1 p := p | r
)";

bool naive_eval(const Formula& f, const std::map<std::string, bool>& v) {
  switch (f.kind()) {
    case FormulaKind::Prop: return v.at(f.name());
    case FormulaKind::Top: return true;
    case FormulaKind::Neg: return !naive_eval(f.sub(), v);
    case FormulaKind::And: return naive_eval(f.left(), v) && naive_eval(f.right(), v);
    case FormulaKind::Dia: break;
  }
  throw std::logic_error("naive_eval: modal formula");
}

bool naive_tautology(const Formula& f, const std::vector<std::string>& names) {
  for (std::size_t row = 0; row < (std::size_t{1} << names.size()); ++row) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (row >> i) & 1;
    if (!naive_eval(f, v)) return false;
  }
  return true;
}

Formula random_boolean(std::mt19937_64& rng, int depth, std::size_t vars) {
  if (depth <= 0 || rng() % 5 == 0) return prop("x" + std::to_string(rng() % vars));
  switch (rng() % 4) {
    case 0: return neg(random_boolean(rng, depth - 1, vars));
    case 1: return conj(random_boolean(rng, depth - 1, vars), random_boolean(rng, depth - 1, vars));
    case 2: return disj(random_boolean(rng, depth - 1, vars), random_boolean(rng, depth - 1, vars));
    default: return implies(random_boolean(rng, depth - 1, vars), random_boolean(rng, depth - 1, vars));
  }
}

}  // namespace

TEST_CASE("proof systems per config") {
  const ProofSystem pdl = proof_system(shipped_config("pdl"));
  CHECK(pdl.find("dia-or"));
  CHECK(pdl.find("dia-bot"));
  CHECK_FALSE(pdl.find("mono"));
  CHECK(pdl.find("pw+"));
  CHECK(pdl.find("comp"));
  CHECK(pdl.find("star"));
  CHECK(pdl.find("test"));

  const ProofSystem gl = proof_system(shipped_config("gl"));
  CHECK(gl.find("mono"));
  CHECK_FALSE(gl.find("dia-or"));
  CHECK_FALSE(gl.find("pw^"));
  CHECK(proof_system(shipped_config("gl-cap")).find("pw^"));
  CHECK(proof_system(shipped_config("fpdl")).find("pw+") == nullptr);
}

TEST_CASE("schema instantiation") {
  const ProofSystem sys = proof_system(shipped_config("pdl"));
  const Schema& st = *sys.find("star");
  REQUIRE(st.action_vars == std::vector<std::string>{"a"});
  REQUIRE(st.formula_vars == std::vector<std::string>{"p"});
  CHECK(instantiate_schema(st, {parse_action("a;b")}, {F("q")}) == F("<(a;b)*>q <-> q | <a;b><(a;b)*>q"));

  const Schema& t = *sys.find("test");
  REQUIRE(t.formula_vars.size() == 2);
  CHECK(instantiate_schema(t, {}, {F("p"), F("p")}) == F("<?p>p <-> p & p"));

  const Schema& c = *sys.find("comp");
  CHECK(instantiate_schema(c, {act("x"), star(act("y"))}, {F("<z>r")}) == F("<x;y*>(<z>r) <-> <x><y*><z>r"));
  CHECK_THROWS_AS(instantiate_schema(c, {act("x")}, {F("r")}), std::invalid_argument);
}

TEST_CASE("schema matching") {
  const ProofSystem sys = proof_system(shipped_config("gl-cap"));
  std::mt19937_64 rng(7);
  const std::vector<Formula> fs = {F("p"), F("~q"), F("<a>~p"), F("~~r & q"), F("true"), F("false")};
  const std::vector<Action> as = {act("a"), parse_action("a;b*"), parse_action("?~p"), parse_action("a ^ b")};
  for (const Schema& s : sys.schemas) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Action> a;
      std::vector<Formula> f;
      for (std::size_t i = 0; i < s.action_vars.size(); ++i) a.push_back(as[rng() % as.size()]);
      for (std::size_t i = 0; i < s.formula_vars.size(); ++i) f.push_back(fs[rng() % fs.size()]);
      const Formula inst = instantiate_schema(s, a, f);
      const auto sub = match_schema(s, inst);
      REQUIRE_MESSAGE(sub, s.name << ": " << to_string(inst));
      CHECK(substitute(s.pattern, *sub) == inst);
    }
  }
  CHECK_FALSE(match_schema(*sys.find("mono"), F("<a>(p & q) -> <b>p")));
  CHECK_FALSE(match_schema(*sys.find("mono"), F("<a>(p | q) -> <a>p")));
  CHECK(match_schema(*sys.find("test"), F("<?~q>p <-> ~q & p")));
}

TEST_CASE("tautologies") {
  CHECK(is_tautology(F("p | ~p")));
  CHECK(is_tautology(F("<a>p -> <a>p")));
  CHECK_FALSE(is_tautology(F("<a>p -> <a>(p | p)")));
  CHECK_FALSE(is_tautology(F("p")));
  CHECK(is_tautology(F("true")));
  CHECK(boolean_literals(F("<a>p & ~q | <a>p")).size() == 2);

  std::mt19937_64 rng(42);
  int positives = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t vars = 1 + rng() % 10;
    Formula f = random_boolean(rng, 5, vars);
    if (trial % 3 == 0) f = disj(f, neg(random_boolean(rng, 1, vars)));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars; ++i) names.push_back("x" + std::to_string(i));
    const bool expected = naive_tautology(f, names);
    positives += expected;
    REQUIRE_MESSAGE(is_tautology(f) == expected, to_string(f));
  }
  CHECK(positives > 50);

  std::vector<Formula> many;
  for (int i = 0; i < 25; ++i) many.push_back(prop("v" + std::to_string(i)));
  CHECK_THROWS_AS(is_tautology(disj_all(many)), std::invalid_argument);
}

TEST_CASE("script parsing") {
  const Derivation d = parse_script(kStarScript, Signature::standard());
  REQUIRE(d.steps.size() == 4);
  CHECK(d.steps[0].line == 2);
  CHECK(d.steps[3].why.kind == Justification::Kind::Star);
  const Derivation m = parse_script(kMonoScript, Signature::standard());
  REQUIRE(m.steps[1].why.substitution.size() == 2);
  CHECK(m.steps[1].why.substitution[0].second == "b*");

  CHECK_THROWS_AS(parse_script("1. p ; frobnicate", Signature::standard()), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p taut", Signature::standard()), ScriptError);
  CHECK_THROWS_AS(parse_script("2. p ; taut\n1. p ; taut", Signature::standard()), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p & ; taut", Signature::standard()), ScriptError);
  CHECK_THROWS_AS(parse_script("1. p ; mp 1", Signature::standard()), ScriptError);
  try {
    parse_script("\n\n1. p ; subst 1 p", Signature::standard());
    FAIL("expected a ScriptError");
  } catch (const ScriptError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("derivations") {
  const ProofSystem pdl = proof_system(shipped_config("pdl"));
  const ProofSystem gl = proof_system(shipped_config("gl"));
  CHECK(check_script(gl, kCongScript).accepted());
  CHECK(check_script(pdl, kCongScript).accepted());
  CHECK(check_script(gl, kMonoScript).accepted());
  CHECK(check_script(pdl, kStarScript).accepted());
  CHECK(check_script(gl, kStarScript).accepted());
  const ProofVerdict v = check_script(pdl, kPdlScript);
  CHECK_MESSAGE(v.accepted(), v.message);

  using Status = ProofVerdict::Status;
  auto status = [](const ProofSystem& s, const char* text) { return check_script(s, text).status; };
  CHECK(status(pdl, kMonoScript) == Status::SchemaMismatch);
  CHECK(status(gl, "1. ~<a>false ; axiom dia-bot") == Status::SchemaMismatch);
  CHECK(status(pdl, "1. <a>p <-> <a>p | <a>q ; axiom dia-or") == Status::SchemaMismatch);
  CHECK(status(pdl, "1. p -> q ; taut") == Status::NotTautology);
  CHECK(status(pdl, "1. p | ~p ; taut\n2. q | ~q ; taut\n3. q ; mp 1 2") == Status::RuleMismatch);
  CHECK(status(pdl, "1. p | ~p ; taut\n2. p ; mp 1 5") == Status::BadIndex);
  CHECK(status(pdl, "1. p | ~p ; taut\n2. p ; mp 2 1") == Status::BadIndex);
  CHECK(status(pdl, "1. p | ~p ; taut\n2. q | ~p ; subst 1 r := q") == Status::RuleMismatch);
  CHECK(status(pdl, "1. p | ~p ; taut\n2. q | ~q ; subst 1 p := (q") == Status::Malformed);
  CHECK(status(pdl, "1. p | ~p ; taut\n2. <a>p | ~<a>p ; cong 1") == Status::RuleMismatch);
  CHECK(status(pdl, "1. p <-> ~~p ; taut\n2. <b>p <-> <a>p ; cong 1") == Status::RuleMismatch);
  CHECK(status(pdl, "1. <a>p | p -> p ; taut\n2. <a*>p -> p ; star 1") == Status::NotTautology);
  CHECK(status(pdl, "1. p -> p ; taut\n2. <a*>p -> p ; star 1") == Status::RuleMismatch);
  CHECK(status(pdl, "1. p ; nonsense") == Status::Malformed);

  // Operations outside the config's signature do not parse.
  CHECK(status(gl, "1. <a ^ b>p -> <a ^ b>p ; taut") == Status::Malformed);

  // mp accepts its premises in either order.
  CHECK(check_script(pdl, "1. p | ~p ; taut\n2. (p | ~p) -> (q | ~q) ; taut\n3. q | ~q ; mp 2 1").accepted());

  const ProofVerdict bad = check_script(pdl, "1. p | ~p ; taut\n2. p -> q ; taut");
  CHECK(bad.step == 2);
  CHECK(std::string(status_name(bad.status)) == "not-tautology");
}

TEST_CASE("accepted conclusions hold on random models") {
  struct Case {
    const char* config;
    const char* script;
  };
  const Case cases[] = {{"pdl", kCongScript}, {"gl", kCongScript}, {"gl", kMonoScript},
                        {"pdl", kStarScript}, {"gl", kStarScript}, {"pdl", kPdlScript}};
  std::mt19937_64 rng(2024);
  for (const auto& c : cases) {
    const InstanceConfig cfg = shipped_config(c.config);
    const ProofSystem sys = proof_system(cfg);
    REQUIRE(check_script(sys, c.script).accepted());
    const Derivation d = parse_script(c.script, sys.signature);
    for (int trial = 0; trial < 60; ++trial) {
      const DynamicModel m = random_model(cfg, 1 + rng() % 3, {"p", "q", "r"}, {"a", "b", "c"}, rng);
      for (const Step& s : d.steps) CHECK_MESSAGE(check_axiom_validity(m, s.formula), c.config << " " << s.number);
    }
  }
}

TEST_CASE("rules see through printing of consequents") {
  const ProofSystem pdl = proof_system(shipped_config("pdl"));
  const char* script = R"(
1. (q | ~q) <-> (~q | q) ; taut
2. <a>(q | ~q) <-> <a>(~q | q) ; cong 1
3. <a>(q | ~q) | (q | ~q) -> (q | ~q) ; taut
4. <a*>(q | ~q) -> (q | ~q) ; star 3
)";
  const ProofVerdict v = check_script(pdl, script);
  CHECK_MESSAGE(v.accepted(), v.message);
}
