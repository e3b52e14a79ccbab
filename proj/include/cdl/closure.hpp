#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "cdl/formula.hpp"
#include "cdl/signature.hpp"
#include "cdl/state_set.hpp"

namespace cdl {

/// One side of a negation pair: the pair's positive formula or its negation.
struct Literal {
  std::size_t pair = 0;
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Local consistency condition attached to a pair: the positive formula of
/// the pair holds in an atom iff the right-hand side does.
struct HintikkaRule {
  enum class Kind { Free, True, Lit, And, Or };
  Kind kind = Kind::Free;
  Literal a, b;
};

/// Fischer-Ladner closure, stored as negation pairs. Pair i holds a formula
/// that is not a negation; formulas()[2i] is that formula and
/// formulas()[2i+1] its negation. Pair 0 belongs to the root formula.
class Closure {
 public:
  const Formula& root() const { return root_; }
  std::size_t pair_count() const { return positives_.size(); }
  std::size_t size() const { return 2 * positives_.size(); }
  const Formula& positive(std::size_t pair) const { return positives_[pair]; }
  const std::vector<Formula>& positives() const { return positives_; }
  std::vector<Formula> formulas() const;

  std::optional<Literal> literal(const Formula& f) const;
  /// As literal(), but throws std::out_of_range for formulas outside the closure.
  Literal literal_of(const Formula& f) const;
  bool contains(const Formula& f) const { return literal(f).has_value(); }
  Formula formula(Literal l) const;

  const std::vector<HintikkaRule>& rules() const { return rules_; }
  /// Pairs whose positive formula is a diamond, in pair order.
  const std::vector<std::size_t>& diamond_pairs() const { return diamonds_; }

  /// An atom is a set of pairs: bit i set means the positive side is in.
  bool holds(const StateSet& atom, Literal l) const { return atom.test(l.pair) == l.positive; }
  bool holds(const StateSet& atom, const Formula& f) const { return holds(atom, literal_of(f)); }
  bool rule_holds(const StateSet& atom, std::size_t pair) const;
  bool is_hintikka(const StateSet& atom) const;

 private:
  friend Closure fl_closure(const Formula& phi, const Signature& sig);

  Formula root_;
  std::vector<Formula> positives_;
  std::unordered_map<Formula, std::size_t, FormulaHash> index_;
  std::vector<HintikkaRule> rules_;
  std::vector<std::size_t> diamonds_;
};

/// Least set containing phi that is closed under subformulas, single
/// negation and the unfolding conditions for ;, pointwise operations, tests
/// and *. Pointwise diamonds contribute their axiom body instantiated at the
/// diamond's own argument formula. Throws std::invalid_argument if phi uses
/// a symbol missing from sig.
Closure fl_closure(const Formula& phi, const Signature& sig = Signature::standard());

/// Disjunction over the given atoms of the conjunction of their literals.
/// No atoms gives false.
Formula characteristic_formula(const Closure& closure, const std::vector<StateSet>& atoms);

}  // namespace cdl
