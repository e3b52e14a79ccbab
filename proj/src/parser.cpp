#include "cdl/parser.hpp"

#include <cctype>
#include <optional>

namespace cdl {

namespace {

enum class Tok {
  Ident, True, False, Not, And, Or, Imp, Iff, LAngle, RAngle, LBrack, RBrack,
  LParen, RParen, Semi, Plus, Caret, Star, Quest, Comma, End, Invalid
};

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::size_t len = 0;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Semi: return "';'";
    case Tok::Plus: return "'+'";
    case Tok::Caret: return "'^'";
    case Tok::Star: return "'*'";
    case Tok::Quest: return "'?'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
    case Tok::Invalid: return "invalid character";
  }
  return "token";
}

// Tokens are produced lazily so that a prefix parse never trips over
// trailing text that is not part of the grammar.
class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : s_(text), sig_(sig) {}

  Formula formula() { return parse_iff(); }
  Action program() { return parse_plus(); }

  void expect_end() {
    const Token& t = peek();
    if (t.kind != Tok::End) fail(t, std::string("unexpected ") + describe(t.kind));
  }

  std::size_t consumed_end() const { return last_end_; }

 private:
  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::Iff)) f = iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Imp)) return implies(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Or)) f = disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::And)) f = conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Not:
        next();
        return neg(parse_unary());
      case Tok::LAngle: {
        next();
        Action a = program();
        expect(Tok::RAngle, "'>' closing a diamond");
        return dia(a, parse_unary());
      }
      case Tok::LBrack: {
        next();
        Action a = program();
        expect(Tok::RBrack, "']' closing a box");
        return box(a, parse_unary());
      }
      case Tok::True:
        next();
        return top();
      case Tok::False:
        next();
        return bot();
      case Tok::Ident:
        next();
        return prop(t.text);
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        fail(t, std::string("expected formula, found ") + describe(t.kind));
    }
  }

  Action binary_op(const Token& at, const std::string& symbol, Action l, Action r) {
    const SignatureEntry* e = sig_.find(symbol);
    if (!e) fail(at, "unknown pointwise symbol '" + symbol + "'");
    if (e->arity != 2) fail(at, arity_message(*e, 2));
    return op(symbol, {std::move(l), std::move(r)});
  }

  Action parse_plus() {
    Action a = parse_caret();
    while (peek().kind == Tok::Plus) {
      Token t = next();
      a = binary_op(t, "+", a, parse_caret());
    }
    return a;
  }

  Action parse_caret() {
    Action a = parse_seq();
    while (peek().kind == Tok::Caret) {
      Token t = next();
      a = binary_op(t, "^", a, parse_seq());
    }
    return a;
  }

  Action parse_seq() {
    Action a = parse_test();
    while (accept(Tok::Semi)) a = seq(a, parse_test());
    return a;
  }

  Action parse_test() {
    if (accept(Tok::Quest)) return test(parse_unary());
    return parse_postfix();
  }

  Action parse_postfix() {
    Action a = parse_prog_primary();
    while (accept(Tok::Star)) a = star(a);
    return a;
  }

  Action parse_prog_primary() {
    const Token t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Action a = program();
      expect(Tok::RParen, "')'");
      return a;
    }
    if (t.kind != Tok::Ident) fail(t, std::string("expected program, found ") + describe(t.kind));
    next();
    if (peek().kind != Tok::LParen) return act(t.text);
    const SignatureEntry* e = sig_.find(t.text);
    if (!e) fail(t, "unknown pointwise symbol '" + t.text + "'");
    next();
    std::vector<Action> args{program()};
    while (accept(Tok::Comma)) args.push_back(program());
    expect(Tok::RParen, "')' closing argument list");
    if (args.size() != e->arity) fail(t, arity_message(*e, args.size()));
    return op(t.text, std::move(args));
  }

  static std::string arity_message(const SignatureEntry& e, std::size_t got) {
    return "arity mismatch: '" + e.symbol + "' expects " + std::to_string(e.arity) +
           " arguments, got " + std::to_string(got);
  }

  const Token& peek() {
    if (!ahead_) ahead_ = lex(pos_);
    return *ahead_;
  }

  Token next() {
    Token t = peek();
    pos_ = t.pos + t.len;
    if (t.kind != Tok::End) last_end_ = pos_;
    ahead_.reset();
    return t;
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }

  void expect(Tok k, const char* what) {
    const Token& t = peek();
    if (t.kind != k) fail(t, std::string("expected ") + what + ", found " + describe(t.kind));
    next();
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) { throw ParseError(t.pos, what); }

  Token lex(std::size_t p) const {
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    Token t;
    t.pos = p;
    if (p >= s_.size()) return t;
    const char c = s_[p];
    if (ident_start(c)) {
      std::size_t q = p;
      while (q < s_.size() && ident_char(s_[q])) ++q;
      t.text = std::string(s_.substr(p, q - p));
      t.len = q - p;
      t.kind = t.text == "true" ? Tok::True : t.text == "false" ? Tok::False : Tok::Ident;
      return t;
    }
    auto starts = [&](std::string_view w) { return s_.substr(p, w.size()) == w; };
    if (starts("<->")) {
      t.kind = Tok::Iff;
      t.len = 3;
      return t;
    }
    if (starts("->")) {
      t.kind = Tok::Imp;
      t.len = 2;
      return t;
    }
    t.len = 1;
    switch (c) {
      case '~': t.kind = Tok::Not; break;
      case '&': t.kind = Tok::And; break;
      case '|': t.kind = Tok::Or; break;
      case '<': t.kind = Tok::LAngle; break;
      case '>': t.kind = Tok::RAngle; break;
      case '[': t.kind = Tok::LBrack; break;
      case ']': t.kind = Tok::RBrack; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ';': t.kind = Tok::Semi; break;
      case '+': t.kind = Tok::Plus; break;
      case '^': t.kind = Tok::Caret; break;
      case '*': t.kind = Tok::Star; break;
      case '?': t.kind = Tok::Quest; break;
      case ',': t.kind = Tok::Comma; break;
      default: t.kind = Tok::Invalid; break;
    }
    return t;
  }

  std::string_view s_;
  const Signature& sig_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  std::optional<Token> ahead_;
};

// Printing levels. Formulas: <-> 1, -> 2, | 3, & 4, prefix 5, atomic 6.
// Programs: + 1, ^ 2, ; 3, ? 4, * 5, atomic 6.
std::string print(const Formula& f, int min_level);
std::string print(const Action& a, int min_level);

std::string wrap(std::string s, int level, int min_level) {
  return level < min_level ? "(" + s + ")" : s;
}

std::string print(const Formula& f, int min_level) {
  Formula x, y;
  Action alpha;
  switch (f.kind()) {
    case FormulaKind::Prop:
      return f.name();
    case FormulaKind::Top:
      return "true";
    case FormulaKind::Neg:
      if (is_bot(f)) return "false";
      if (match_box(f, alpha, x)) return "[" + print(alpha, 1) + "]" + print(x, 5);
      if (match_or(f, x, y)) return wrap(print(x, 3) + " | " + print(y, 4), 3, min_level);
      if (match_imp(f, x, y)) return wrap(print(x, 3) + " -> " + print(y, 2), 2, min_level);
      return wrap("~" + print(f.sub(), 5), 5, min_level);
    case FormulaKind::And:
      if (match_iff(f, x, y)) return wrap(print(x, 1) + " <-> " + print(y, 2), 1, min_level);
      return wrap(print(f.left(), 4) + " & " + print(f.right(), 5), 4, min_level);
    case FormulaKind::Dia:
      return wrap("<" + print(f.action(), 1) + ">" + print(f.body(), 5), 5, min_level);
  }
  return "?";
}

std::string print(const Action& a, int min_level) {
  switch (a.kind()) {
    case ActionKind::Atom:
      return a.name();
    case ActionKind::Seq:
      return wrap(print(a.arg(0), 3) + ";" + print(a.arg(1), 4), 3, min_level);
    case ActionKind::Op: {
      if (a.args().size() == 2 && a.name() == "+")
        return wrap(print(a.arg(0), 1) + " + " + print(a.arg(1), 2), 1, min_level);
      if (a.args().size() == 2 && a.name() == "^")
        return wrap(print(a.arg(0), 2) + " ^ " + print(a.arg(1), 3), 2, min_level);
      std::string out = a.name() + "(";
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (i) out += ", ";
        out += print(a.arg(i), 1);
      }
      return out + ")";
    }
    case ActionKind::Star:
      return wrap(print(a.arg(0), 5) + "*", 5, min_level);
    case ActionKind::Test:
      return wrap("?" + print(a.test(), 5), 4, min_level);
  }
  return "?";
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

Action parse_action(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Action a = p.program();
  p.expect_end();
  return a;
}

Formula parse_formula_prefix(std::string_view text, std::size_t& end, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  end = p.consumed_end();
  return f;
}

Action parse_action_prefix(std::string_view text, std::size_t& end, const Signature& sig) {
  Parser p(text, sig);
  Action a = p.program();
  end = p.consumed_end();
  return a;
}

std::string to_string(const Formula& f) { return print(f, 1); }
std::string to_string(const Action& a) { return print(a, 1); }

std::string dump_ast(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Prop:
      return "AtomProp(" + f.name() + ")";
    case FormulaKind::Top:
      return "Top";
    case FormulaKind::Neg:
      return "Neg(" + dump_ast(f.sub()) + ")";
    case FormulaKind::And:
      return "And(" + dump_ast(f.left()) + ", " + dump_ast(f.right()) + ")";
    case FormulaKind::Dia:
      return "Dia(" + dump_ast(f.action()) + ", " + dump_ast(f.body()) + ")";
  }
  return "?";
}

std::string dump_ast(const Action& a) {
  switch (a.kind()) {
    case ActionKind::Atom:
      return "AtomAct(" + a.name() + ")";
    case ActionKind::Seq:
      return "Seq(" + dump_ast(a.arg(0)) + ", " + dump_ast(a.arg(1)) + ")";
    case ActionKind::Op: {
      std::string out = "PwOp(" + a.name() + ", [";
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (i) out += ", ";
        out += dump_ast(a.arg(i));
      }
      return out + "])";
    }
    case ActionKind::Star:
      return "Star(" + dump_ast(a.arg(0)) + ")";
    case ActionKind::Test:
      return "Test(" + dump_ast(a.test()) + ")";
  }
  return "?";
}

}  // namespace cdl
