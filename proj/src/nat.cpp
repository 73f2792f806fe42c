#include "condreal/nat.hpp"

#include "condreal/errors.hpp"

namespace condreal {

std::string nat_str(const Nat& n) { return n.str(); }

std::string rat_str(const Rat& x) {
  Int num = rat_num(x), den = rat_den(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational", 0);
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::size_t& j) {
    std::size_t start = j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == start) throw ParseError("expected digits in rational", j);
    return text.substr(start, j - start);
  };
  std::string whole = digits(i);
  Int num(whole);
  Int den = 1;
  if (i < text.size() && text[i] == '/') {
    ++i;
    std::string d = digits(i);
    den = Int(d);
    if (den == 0) throw ParseError("zero denominator", i);
  } else if (i < text.size() && text[i] == '.') {
    ++i;
    std::string frac = digits(i);
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
  }
  if (i != text.size()) throw ParseError("trailing characters in rational", i);
  Rat r(num, den);
  return negative ? Rat(-r) : r;
}

}  // namespace condreal
