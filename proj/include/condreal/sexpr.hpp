#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "condreal/errors.hpp"
#include "condreal/nat.hpp"

namespace condreal {

// Shared s-expression layer for the textual formats: base-function terms,
// operator terms, systems and witnesses.  Atoms are symbols or naturals;
// `;` starts a line comment; whitespace is insignificant.
struct SExpr {
  enum class Kind { Symbol, Number, List };
  Kind kind = Kind::List;
  std::string symbol;
  Nat number;
  std::vector<SExpr> items;
  std::size_t position = 0;  // offset into the source text, for error reports

  bool is_symbol(const std::string& s) const { return kind == Kind::Symbol && symbol == s; }
  bool is_list() const { return kind == Kind::List; }

  static SExpr sym(std::string s) {
    SExpr e;
    e.kind = Kind::Symbol;
    e.symbol = std::move(s);
    return e;
  }
  static SExpr num(Nat n) {
    SExpr e;
    e.kind = Kind::Number;
    e.number = std::move(n);
    return e;
  }
  static SExpr list(std::vector<SExpr> xs) {
    SExpr e;
    e.kind = Kind::List;
    e.items = std::move(xs);
    return e;
  }
};

SExpr parse_sexpr(const std::string& text);                 // exactly one expression
std::vector<SExpr> parse_sexpr_all(const std::string& text);
std::string write_sexpr(const SExpr&);

}  // namespace condreal
