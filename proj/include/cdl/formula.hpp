#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cdl {

enum class FormulaKind { Prop, Top, Neg, And, Dia };
enum class ActionKind { Atom, Seq, Op, Star, Test };

struct FormulaNode;
struct ActionNode;
class Action;

/// Immutable, shared formula value. Only the normalized constructors
/// Prop, Top, Neg, And and Dia exist; everything else is built from them.
class Formula {
 public:
  Formula() = default;

  bool valid() const { return node_ != nullptr; }
  FormulaKind kind() const;

  const std::string& name() const;  // Prop
  const Formula& sub() const;       // Neg
  const Formula& left() const;      // And
  const Formula& right() const;     // And
  const Action& action() const;     // Dia
  const Formula& body() const;      // Dia

  bool is_neg() const { return valid() && kind() == FormulaKind::Neg; }
  std::size_t hash() const;
  /// Number of AST nodes, counting formula and action nodes.
  std::size_t size() const;
  const FormulaNode* node() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  friend struct FormulaFactory;
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

class Action {
 public:
  Action() = default;

  bool valid() const { return node_ != nullptr; }
  ActionKind kind() const;

  /// Atom name or pointwise symbol.
  const std::string& name() const;
  /// Seq: two arguments; Op: n arguments; Star: one argument.
  const std::vector<Action>& args() const;
  const Action& arg(std::size_t i) const { return args()[i]; }
  const Formula& test() const;  // Test

  std::size_t hash() const;
  std::size_t size() const;
  const ActionNode* node() const { return node_.get(); }

  friend bool operator==(const Action& a, const Action& b);
  friend bool operator<(const Action& a, const Action& b);

 private:
  friend struct FormulaFactory;
  explicit Action(std::shared_ptr<const ActionNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ActionNode> node_;
};

int compare(const Formula& a, const Formula& b);
int compare(const Action& a, const Action& b);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct ActionHash {
  std::size_t operator()(const Action& a) const { return a.hash(); }
};

// Formula builders. neg() removes a double negation, so every formula
// built through this interface is normalized.
Formula prop(const std::string& name);
Formula top();
Formula bot();
Formula neg(const Formula& f);
Formula conj(const Formula& a, const Formula& b);
Formula disj(const Formula& a, const Formula& b);
Formula implies(const Formula& a, const Formula& b);
Formula iff(const Formula& a, const Formula& b);
Formula dia(const Action& alpha, const Formula& f);
Formula box(const Action& alpha, const Formula& f);

Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

// Action builders.
Action act(const std::string& name);
Action seq(const Action& a, const Action& b);
Action op(const std::string& symbol, std::vector<Action> args);
Action star(const Action& a);
Action test(const Formula& f);

/// Recognizers for the sugared shapes of normalized formulas. Each fills
/// its outputs only on success.
bool match_or(const Formula& f, Formula& a, Formula& b);
bool match_imp(const Formula& f, Formula& a, Formula& b);
bool match_iff(const Formula& f, Formula& a, Formula& b);
bool match_box(const Formula& f, Action& alpha, Formula& body);
bool is_bot(const Formula& f);

struct Substitution {
  std::map<std::string, Formula> props;
  std::map<std::string, Action> actions;
  bool empty() const { return props.empty() && actions.empty(); }
};

/// Simultaneous uniform substitution of propositions and atomic actions.
Formula substitute(const Formula& f, const Substitution& s);
Action substitute(const Action& a, const Substitution& s);

/// Names of atomic propositions / atomic actions / pointwise symbols
/// occurring anywhere in the term (tests included), sorted.
std::vector<std::string> prop_names(const Formula& f);
std::vector<std::string> action_names(const Formula& f);
std::vector<std::string> op_symbols(const Formula& f);

}  // namespace cdl
