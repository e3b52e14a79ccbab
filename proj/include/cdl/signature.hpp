#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdl/formula.hpp"

namespace cdl {

/// A conjunction/disjunction tree over argument placeholders x0, x1, ...
struct PositiveTerm {
  enum class Kind { Leaf, And, Or };
  Kind kind = Kind::Leaf;
  std::size_t index = 0;
  std::vector<PositiveTerm> children;

  static PositiveTerm leaf(std::size_t i);
  static PositiveTerm conj(PositiveTerm a, PositiveTerm b);
  static PositiveTerm disj(PositiveTerm a, PositiveTerm b);

  /// Largest placeholder index plus one.
  std::size_t arity_used() const;
  std::string to_string() const;

  friend bool operator==(const PositiveTerm&, const PositiveTerm&) = default;
};

/// Parses terms such as "x0 | x1" or "x0 & (x1 | x2)"; & binds tighter.
PositiveTerm parse_positive_term(const std::string& text);

struct SignatureEntry {
  std::string symbol;
  std::size_t arity = 0;
  PositiveTerm chi;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<SignatureEntry> entries);

  /// Union (+), intersection (^) and the unary identity operation (id).
  static const Signature& standard();

  /// Throws std::invalid_argument on duplicate symbols, zero arity or
  /// placeholders out of range.
  void add(SignatureEntry e);
  const SignatureEntry* find(const std::string& symbol) const;
  bool contains(const std::string& symbol) const { return find(symbol) != nullptr; }
  const std::vector<SignatureEntry>& entries() const { return entries_; }

 private:
  std::vector<SignatureEntry> entries_;
};

/// Right-hand side of the pointwise axiom for op(args): each placeholder
/// leaf i becomes <args[i]>placeholder.
Formula pw_axiom_body(const SignatureEntry& entry, const std::vector<Action>& args,
                      const Formula& placeholder);

}  // namespace cdl
