#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cdl/formula.hpp"
#include "cdl/signature.hpp"

namespace cdl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + what),
        pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Formulas:  true false p ~f f&f f|f f->f f<->f <prog>f [prog]f (f)
// Programs:  a prog;prog prog+prog prog^prog prog* ?f (prog) sym(prog, ...)
// Binding, tightest first: * ? ; ^ +   and   ~ <> [] & | -> <->.
// -> is right associative, every other binary operator left associative.
Formula parse_formula(std::string_view text, const Signature& sig = Signature::standard());
Action parse_action(std::string_view text, const Signature& sig = Signature::standard());

/// Parses the longest formula at the start of text and stores in `end` the
/// offset just past it. Used for line formats that put data after a formula.
Formula parse_formula_prefix(std::string_view text, std::size_t& end,
                             const Signature& sig = Signature::standard());
Action parse_action_prefix(std::string_view text, std::size_t& end, const Signature& sig = Signature::standard());

/// Concrete syntax with sugar restored and minimal parentheses;
/// parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f);
std::string to_string(const Action& a);

/// Constructor-style dump of the normalized AST.
std::string dump_ast(const Formula& f);
std::string dump_ast(const Action& a);

}  // namespace cdl
