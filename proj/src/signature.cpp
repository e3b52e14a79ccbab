#include "cdl/signature.hpp"

#include <cctype>
#include <stdexcept>

namespace cdl {

PositiveTerm PositiveTerm::leaf(std::size_t i) {
  PositiveTerm t;
  t.index = i;
  return t;
}

PositiveTerm PositiveTerm::conj(PositiveTerm a, PositiveTerm b) {
  PositiveTerm t;
  t.kind = Kind::And;
  t.children = {std::move(a), std::move(b)};
  return t;
}

PositiveTerm PositiveTerm::disj(PositiveTerm a, PositiveTerm b) {
  PositiveTerm t;
  t.kind = Kind::Or;
  t.children = {std::move(a), std::move(b)};
  return t;
}

std::size_t PositiveTerm::arity_used() const {
  if (kind == Kind::Leaf) return index + 1;
  std::size_t m = 0;
  for (const auto& c : children) m = std::max(m, c.arity_used());
  return m;
}

std::string PositiveTerm::to_string() const {
  if (kind == Kind::Leaf) return "x" + std::to_string(index);
  const char* sep = kind == Kind::And ? " & " : " | ";
  std::string out = "(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += sep;
    out += children[i].to_string();
  }
  return out + ")";
}

namespace {

class TermParser {
 public:
  explicit TermParser(const std::string& s) : s_(s) {}

  PositiveTerm parse() {
    PositiveTerm t = parse_or();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  PositiveTerm parse_or() {
    PositiveTerm t = parse_and();
    while (eat('|')) t = PositiveTerm::disj(std::move(t), parse_and());
    return t;
  }

  PositiveTerm parse_and() {
    PositiveTerm t = parse_leaf();
    while (eat('&')) t = PositiveTerm::conj(std::move(t), parse_leaf());
    return t;
  }

  PositiveTerm parse_leaf() {
    if (eat('(')) {
      PositiveTerm t = parse_or();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    if (!eat('x')) fail("expected placeholder xN");
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected placeholder index");
    return PositiveTerm::leaf(std::stoul(s_.substr(start, pos_ - start)));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("positive term '" + s_ + "' at " + std::to_string(pos_) + ": " +
                                what);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

PositiveTerm parse_positive_term(const std::string& text) { return TermParser(text).parse(); }

Signature::Signature(std::vector<SignatureEntry> entries) {
  for (auto& e : entries) add(std::move(e));
}

const Signature& Signature::standard() {
  static const Signature sig({
      {"+", 2, PositiveTerm::disj(PositiveTerm::leaf(0), PositiveTerm::leaf(1))},
      {"^", 2, PositiveTerm::conj(PositiveTerm::leaf(0), PositiveTerm::leaf(1))},
      {"id", 1, PositiveTerm::leaf(0)},
  });
  return sig;
}

void Signature::add(SignatureEntry e) {
  if (e.symbol.empty()) throw std::invalid_argument("signature: empty symbol");
  if (find(e.symbol)) throw std::invalid_argument("signature: duplicate symbol '" + e.symbol + "'");
  if (e.arity == 0) throw std::invalid_argument("signature: symbol '" + e.symbol + "' has arity 0");
  if (e.chi.arity_used() > e.arity)
    throw std::invalid_argument("signature: term of '" + e.symbol + "' uses a placeholder beyond its arity");
  entries_.push_back(std::move(e));
}

const SignatureEntry* Signature::find(const std::string& symbol) const {
  for (const auto& e : entries_)
    if (e.symbol == symbol) return &e;
  return nullptr;
}

namespace {

Formula instantiate_term(const PositiveTerm& t, const std::vector<Action>& args,
                         const Formula& placeholder) {
  switch (t.kind) {
    case PositiveTerm::Kind::Leaf:
      return dia(args.at(t.index), placeholder);
    case PositiveTerm::Kind::And:
    case PositiveTerm::Kind::Or: {
      Formula out = instantiate_term(t.children[0], args, placeholder);
      for (std::size_t i = 1; i < t.children.size(); ++i) {
        Formula rhs = instantiate_term(t.children[i], args, placeholder);
        out = t.kind == PositiveTerm::Kind::And ? conj(out, rhs) : disj(out, rhs);
      }
      return out;
    }
  }
  throw std::logic_error("pw_axiom_body: bad term");
}

}  // namespace

Formula pw_axiom_body(const SignatureEntry& entry, const std::vector<Action>& args,
                      const Formula& placeholder) {
  if (args.size() != entry.arity)
    throw std::invalid_argument("pointwise symbol '" + entry.symbol + "' expects " +
                                std::to_string(entry.arity) + " arguments, got " +
                                std::to_string(args.size()));
  return instantiate_term(entry.chi, args, placeholder);
}

}  // namespace cdl
