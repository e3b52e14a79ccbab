#include "cdl/lifting.hpp"
#include "cdl/parser.hpp"
#include "doctest.h"

using namespace cdl;

namespace {

LawBudget quick() {
  LawBudget b;
  b.samples = 2000;
  b.square_limit = 1 << 16;
  return b;
}

// A lifting that is not monotone: t is exactly U.
Lifting exact_lifting() {
  return {"exact", Polarity::Neither, [](const TValue& t, const StateSet& u) { return t.set() == u; }};
}

// Not natural: collapsing maps can turn a two-element t into a singleton.
Lifting singleton_inside() {
  return {"singleton-inside", Polarity::Neither,
          [](const TValue& t, const StateSet& u) { return t.set().count() == 1 && t.set().is_subset_of(u); }};
}

}  // namespace

TEST_CASE("liftings evaluate as expected") {
  const std::size_t n = 3;
  const TValue t = TValue::pow(StateSet::from_indices(n, {0, 2}));
  CHECK(kripke_diamond().contains(t, StateSet::from_indices(n, {2})));
  CHECK_FALSE(kripke_diamond().contains(t, StateSet::from_indices(n, {1})));
  CHECK(kripke_box().contains(t, StateSet::from_indices(n, {0, 2})));
  CHECK_FALSE(kripke_box().contains(t, StateSet::from_indices(n, {0})));
  CHECK_FALSE(nonempty_subset().contains(TValue::pow(StateSet(n)), StateSet::full(n)));
  CHECK(kripke_box().contains(TValue::pow(StateSet(n)), StateSet(n)));
  CHECK_THROWS_AS(kripke_diamond().contains(TValue::filter(StateSet(n)), StateSet(n)), std::invalid_argument);

  // Filter diamond against the generator form: the complement of U is not
  // in the upset of A iff A meets U.
  for (const auto& a : all_subsets(n))
    for (const auto& u : all_subsets(n))
      CHECK(filter_diamond().contains(TValue::filter(a), u) == a.intersects(u));

  // The dual of the Kripke diamond is the Kripke box.
  const Lifting dual = boolean_dual(kripke_diamond());
  CHECK(dual.declared == Polarity::Box);
  for (const auto& a : all_subsets(n))
    for (const auto& u : all_subsets(n))
      CHECK(dual.contains(TValue::pow(a), u) == kripke_box().contains(TValue::pow(a), u));
}

TEST_CASE("transpose") {
  const TValue t = transpose(kripke_diamond(), TValue::pow(StateSet::from_indices(2, {0})));
  CHECK(t == TValue::nbhd({StateSet::from_indices(2, {0}), StateSet::from_indices(2, {0, 1})}, 2));
  const TValue m = TValue::mon_nbhd({StateSet::from_indices(2, {1})}, 2);
  CHECK(transpose(neighbourhood_modality(), m) == TValue::nbhd(m.members(), 2));
}

TEST_CASE("polarity classification") {
  const LawBudget b = quick();
  CHECK(classify_polarity(kripke_diamond(), pow_monad(), 3, b).result == Polarity::Diamond);
  CHECK(classify_polarity(kripke_box(), pow_monad(), 3, b).result == Polarity::Box);
  CHECK(classify_polarity(nonempty_subset(), pow_monad(), 3, b).result == Polarity::Neither);
  CHECK(classify_polarity(filter_diamond(), filter_monad(), 3, b).result == Polarity::Diamond);
  CHECK(classify_polarity(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 2, b).result ==
        Polarity::Diamond);
  CHECK(classify_polarity(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 3, b).result ==
        Polarity::Diamond);
  CHECK(classify_polarity(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Intersection), 2, b).result ==
        Polarity::Box);
  CHECK(classify_polarity(neighbourhood_modality(), nbhd_monad(), 2, b).result == Polarity::Diamond);

  const PolarityReport r = classify_polarity(nonempty_subset(), pow_monad(), 2, b);
  CHECK(r.diamond.exhaustive);
  CHECK(r.diamond.violation_count > 0);
  CHECK(r.box.violation_count > 0);
  // families of size 0..3 over 4 values, 4 predicates each
  CHECK(r.diamond.checks == (1 + 4 + 16 + 64) * 4);
}

TEST_CASE("duals of diamond-like liftings are box-like") {
  const LawBudget b = quick();
  CHECK(classify_polarity(boolean_dual(kripke_diamond()), pow_monad(), 3, b).result == Polarity::Box);
  CHECK(classify_polarity(boolean_dual(filter_diamond()), filter_monad(), 3, b).result == Polarity::Box);
  for (std::size_t n : {1, 2, 3}) {
    CAPTURE(n);
    CHECK(classify_polarity(boolean_dual(neighbourhood_modality()), mon_nbhd_monad(JoinKind::Union), n, b).result ==
          Polarity::Box);
  }
}

TEST_CASE("bottom polarity") {
  CHECK(check_bottom_polarity(kripke_diamond(), Polarity::Diamond, pow_monad(), 3).ok());
  CHECK(check_bottom_polarity(neighbourhood_modality(), Polarity::Box, mon_nbhd_monad(JoinKind::Intersection), 3)
            .ok());
  CHECK_FALSE(check_bottom_polarity(kripke_box(), Polarity::Diamond, pow_monad(), 2).ok());
}

TEST_CASE("transposes are monad morphisms") {
  const LawBudget b = quick();
  for (std::size_t n : {1, 2, 3}) {
    CAPTURE(n);
    CHECK(check_transpose_monad_morphism(kripke_diamond(), pow_monad(), n, b).ok());
    CHECK(check_transpose_monad_morphism(kripke_box(), pow_monad(), n, b).ok());
    CHECK(check_transpose_monad_morphism(filter_diamond(), filter_monad(), n, b).ok());
    CHECK(check_transpose_monad_morphism(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), n, b).ok());
  }
  const LawReport pow3 = check_transpose_monad_morphism(kripke_diamond(), pow_monad(), 3, b);
  CHECK(pow3.exhaustive);
  CHECK(pow3.checks == 3 * 8 + 256 * 8);

  // T(TX) for monotone neighbourhoods on one state has 20 elements.
  const LawReport mon1 = check_transpose_monad_morphism(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 1, b);
  CHECK(mon1.exhaustive);
  CHECK(mon1.checks == 1 * 2 + 20 * 2);
  CHECK_FALSE(check_transpose_monad_morphism(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 2, b).exhaustive);

  const LawReport constant = check_transpose_monad_morphism(constant_empty(), pow_monad(), 2, b);
  CHECK(constant.violation_count > 0);
  // The unit square holds for nonempty-subset but multiplication does not:
  // Phi = {empty, {0}} flattens to {0}, inside {0}, while its empty member
  // is rejected.
  const LawReport nonempty = check_transpose_monad_morphism(nonempty_subset(), pow_monad(), 2, b);
  CHECK(nonempty.violation_count > 0);
}

TEST_CASE("composition lemma") {
  const LawBudget b = quick();
  CHECK(check_composition_lemma(kripke_diamond(), pow_monad(), 3, b).ok());
  CHECK(check_composition_lemma(kripke_box(), pow_monad(), 3, b).ok());
  CHECK(check_composition_lemma(filter_diamond(), filter_monad(), 3, b).ok());
  CHECK(check_composition_lemma(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 2, b).ok());
  CHECK(check_composition_lemma(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 3, b).ok());
  CHECK_FALSE(check_composition_lemma(nonempty_subset(), pow_monad(), 2, b).ok());
}

TEST_CASE("composition with the unit") {
  // g = unit: (f;unit)(x) = f(x) and unit^-1(lambda(U)) = U.
  const MonadInstance m = mon_nbhd_monad(JoinKind::Union);
  const Lifting l = neighbourhood_modality();
  const std::size_t n = 3;
  const KleisliArrow eta = unit_arrow(m, n);
  for (const auto& t : enumerate_values(MonadKind::MonNbhd, n)) {
    for (const auto& u : all_subsets(n)) {
      StateSet pre(n);
      for (std::size_t y = 0; y < n; ++y)
        if (l.contains(eta(y), u)) pre.set(y);
      CHECK(pre == u);
      CHECK(l.contains(m.extend(eta, t), u) == l.contains(t, u));
    }
  }
}

TEST_CASE("monotonicity and naturality") {
  const LawBudget b = quick();
  CHECK(check_lifting_monotone(kripke_diamond(), pow_monad(), 3, b).ok());
  CHECK(check_lifting_monotone(nonempty_subset(), pow_monad(), 3, b).ok());
  CHECK(check_lifting_monotone(filter_diamond(), filter_monad(), 3, b).ok());
  CHECK(check_lifting_monotone(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 3, b).ok());
  CHECK_FALSE(check_lifting_monotone(exact_lifting(), pow_monad(), 2, b).ok());

  CHECK(check_lifting_natural(kripke_diamond(), pow_monad(), 3, b).ok());
  CHECK(check_lifting_natural(filter_diamond(), filter_monad(), 3, b).ok());
  CHECK(check_lifting_natural(neighbourhood_modality(), mon_nbhd_monad(JoinKind::Union), 3, b).ok());
  CHECK(check_lifting_natural(neighbourhood_modality(), nbhd_monad(), 2, b).ok());
  CHECK_FALSE(check_lifting_natural(singleton_inside(), pow_monad(), 2, b).ok());
}

TEST_CASE("natural operations") {
  const LawBudget b = quick();
  const NaturalOperation pow_plus = natural_operation("+", MonadKind::Pow);
  CHECK(check_sigma_chi_compat(pow_plus, kripke_diamond(), pow_monad(), 3, b).ok());
  CHECK(check_sigma_natural(pow_plus, pow_monad(), 3, b).ok());
  // Union of relations is conjunctive for the box, so chi = x0 | x1 fails.
  CHECK_FALSE(check_sigma_chi_compat(pow_plus, kripke_box(), pow_monad(), 2, b).ok());

  const MonadInstance mon = mon_nbhd_monad(JoinKind::Union);
  for (const char* sym : {"+", "^", "id"}) {
    CAPTURE(sym);
    const NaturalOperation op = natural_operation(sym, MonadKind::MonNbhd);
    CHECK(check_sigma_chi_compat(op, neighbourhood_modality(), mon, 2, b).ok());
    CHECK(check_sigma_chi_compat(op, neighbourhood_modality(), mon, 3, b).ok());
    CHECK(check_sigma_natural(op, mon, 2, b).ok());
  }
  CHECK(check_sigma_chi_compat(natural_operation("^", MonadKind::Nbhd), neighbourhood_modality(), nbhd_monad(), 2, b)
            .ok());
  CHECK_THROWS_AS(natural_operation("^", MonadKind::Pow), std::invalid_argument);
  CHECK_THROWS_AS(natural_operation("+", MonadKind::Filter), std::invalid_argument);
  CHECK_THROWS_AS(natural_operation("?", MonadKind::Pow), std::invalid_argument);

  const LawReport exhaustive = check_sigma_chi_compat(pow_plus, kripke_diamond(), pow_monad(), 2, b);
  CHECK(exhaustive.exhaustive);
  CHECK(exhaustive.checks == 16 * 4);
}

TEST_CASE("pointwise axioms") {
  const Signature& sig = Signature::standard();
  const Formula p = parse_formula("p", sig);
  const std::vector<Action> ab = {parse_action("a", sig), parse_action("b;c", sig)};
  CHECK(to_string(generate_pw_axiom(*sig.find("+"), ab, p)) == "<a + b;c>p <-> <a>p | <b;c>p");
  CHECK(to_string(generate_pw_axiom(*sig.find("^"), ab, p)) == "<a ^ b;c>p <-> <a>p & <b;c>p");
  CHECK(to_string(generate_pw_axiom(*sig.find("id"), {ab[0]}, p)) == "<id(a)>p <-> <a>p");
  CHECK_THROWS_AS(generate_pw_axiom(*sig.find("+"), {ab[0]}, p), std::invalid_argument);

  const NaturalOperation op = natural_operation("^", MonadKind::MonNbhd);
  CHECK(generate_pw_axiom(op.entry(), ab, p) == generate_pw_axiom(*sig.find("^"), ab, p));
}
