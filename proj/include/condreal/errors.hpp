#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condreal {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"), position(position) {}
  std::size_t position;
};

struct ArityError : Error {
  using Error::Error;
};

struct UnknownNativeError : Error {
  using Error::Error;
};

// A native base function was declared without a monotone majorant, so a
// continuity modulus cannot be computed through it.
struct MissingMajorantError : Error {
  using Error::Error;
};

struct UnboundVariableError : Error {
  using Error::Error;
};

// The parameter search ran out of budget.  This signals either an
// insufficient budget or a point outside the domain; the two are
// indistinguishable by design.
struct BudgetExhaustedError : Error {
  BudgetExhaustedError(const std::string& where, const std::string& budget)
      : Error("budget exhausted in " + where + " (budget " + budget + ")"), where(where) {}
  std::string where;
};

}  // namespace condreal
