#include "condreal/sexpr.hpp"

#include <cctype>

namespace condreal {

namespace {

struct Reader {
  const std::string& text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos >= text.size();
  }

  static bool atom_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
  }

  SExpr read() {
    skip_space();
    if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
    std::size_t start = pos;
    char c = text[pos];
    if (c == '(') {
      ++pos;
      SExpr e = SExpr::list({});
      e.position = start;
      while (true) {
        skip_space();
        if (pos >= text.size()) throw ParseError("missing ')'", start);
        if (text[pos] == ')') {
          ++pos;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", pos);
    while (pos < text.size() && atom_char(text[pos])) ++pos;
    std::string atom = text.substr(start, pos - start);
    bool numeric = !atom.empty();
    for (char d : atom)
      if (!std::isdigit(static_cast<unsigned char>(d))) numeric = false;
    SExpr e = numeric ? SExpr::num(Nat(atom)) : SExpr::sym(atom);
    e.position = start;
    return e;
  }
};

void write_rec(const SExpr& e, std::string& out) {
  switch (e.kind) {
    case SExpr::Kind::Symbol:
      out += e.symbol;
      break;
    case SExpr::Kind::Number:
      out += e.number.str();
      break;
    case SExpr::Kind::List:
      out += '(';
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) out += ' ';
        write_rec(e.items[i], out);
      }
      out += ')';
      break;
  }
}

}  // namespace

SExpr parse_sexpr(const std::string& text) {
  Reader r{text};
  SExpr e = r.read();
  if (!r.at_end()) throw ParseError("trailing input after expression", r.pos);
  return e;
}

std::vector<SExpr> parse_sexpr_all(const std::string& text) {
  Reader r{text};
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

std::string write_sexpr(const SExpr& e) {
  std::string out;
  write_rec(e, out);
  return out;
}

}  // namespace condreal
