#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdl/formula.hpp"
#include "cdl/laws.hpp"
#include "cdl/monad.hpp"
#include "cdl/signature.hpp"

namespace cdl {

enum class Polarity { Diamond, Box, Neither };
const char* polarity_name(Polarity p);

/// A predicate lifting, given by its membership relation t in lambda_X(U).
struct Lifting {
  std::string name;
  Polarity declared = Polarity::Neither;
  std::function<bool(const TValue& t, const StateSet& u)> contains;
};

Lifting kripke_diamond();          // Pow: t meets U
Lifting kripke_box();              // Pow: t inside U
Lifting nonempty_subset();         // Pow: t nonempty and inside U
Lifting neighbourhood_modality();  // MonNbhd, Nbhd: U in t
Lifting filter_diamond();          // Filter: the complement of U is not in t
Lifting constant_empty();          // negative control
/// t in dual(U) iff t not in lambda(X \ U).
Lifting boolean_dual(const Lifting& l);

/// The transpose: every U with t in lambda(U), as a neighbourhood value.
TValue transpose(const Lifting& l, const TValue& t);

struct PolarityReport {
  Polarity result = Polarity::Neither;
  LawReport diamond;  // checks of "join in lambda(U) iff some member is"
  LawReport box;      // checks of "join in lambda(U) iff every member is"
};

/// Tests join-compatibility over families of 0 to 3 values and every U.
PolarityReport classify_polarity(const Lifting& l, const MonadInstance& m, std::size_t n,
                                 const LawBudget& b);

/// Unit and multiplication squares of the transpose. The multiplication
/// square is evaluated on elements Phi of T(TX):
///   mu(Phi) in lambda_X(U)  iff  Phi in lambda_TX({t | t in lambda_X(U)}).
LawReport check_transpose_monad_morphism(const Lifting& l, const MonadInstance& m, std::size_t n,
                                         const LawBudget& b);

/// (f;g)(x) in lambda(U) iff f(x) in lambda(g^-1(lambda(U))).
LawReport check_composition_lemma(const Lifting& l, const MonadInstance& m, std::size_t n,
                                  const LawBudget& b);

LawReport check_lifting_monotone(const Lifting& l, const MonadInstance& m, std::size_t n,
                                 const LawBudget& b);
/// lambda_X(f^-1(U)) = (Tf)^-1(lambda_Y(U)) along all maps n -> n.
LawReport check_lifting_natural(const Lifting& l, const MonadInstance& m, std::size_t n,
                                const LawBudget& b);
/// Diamond-like: bottom is in no lambda(U); box-like: bottom is in every one.
LawReport check_bottom_polarity(const Lifting& l, Polarity p, const MonadInstance& m, std::size_t n);

/// A pointwise program operation: sigma on TX together with the positive
/// term chi describing it through the transpose.
struct NaturalOperation {
  std::string symbol;
  std::size_t arity = 0;
  std::function<TValue(std::size_t n, const std::vector<TValue>& args)> sigma;
  PositiveTerm chi;

  SignatureEntry entry() const { return {symbol, arity, chi}; }
};

/// + (union of relations or neighbourhoods), ^ (intersection of
/// monotone neighbourhoods) and id. Throws std::invalid_argument when the
/// monad has no such operation.
NaturalOperation natural_operation(const std::string& symbol, MonadKind kind);

/// transpose(sigma(t1..tn)) equals chi over transpose(t1)..transpose(tn),
/// with & as intersection and | as union of neighbourhood collections.
LawReport check_sigma_chi_compat(const NaturalOperation& op, const Lifting& l, const MonadInstance& m,
                                 std::size_t n, const LawBudget& b);
/// sigma commutes with Tf along all maps n -> n.
LawReport check_sigma_natural(const NaturalOperation& op, const MonadInstance& m, std::size_t n,
                              const LawBudget& b);

/// <op(args)>placeholder <-> pwaxiom, with chi's leaves i read as
/// <args[i]>placeholder. Throws std::invalid_argument on arity mismatch.
Formula generate_pw_axiom(const SignatureEntry& op, const std::vector<Action>& args,
                          const Formula& placeholder);

}  // namespace cdl
