#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quotdef/common.hpp"
#include "quotdef/formula.hpp"

namespace quotdef {

// Text grammar (whitespace insignificant):
//   term    ::= "1" | ident | "(" term "+" term ")" | "F" "(" term ")"
//   formula ::= "(" term "=" term ")" | "(" formula "&" formula ")"
//             | "(" formula "|" formula ")"
//             | "exists" ident [ "<=" term ] "." formula
//   ident   ::= [a-z][a-z0-9_]*      ("exists" is reserved)
// An equation is also accepted without its enclosing parentheses.
// Only SearchTo hints have a textual form; other quantifiers print bare.

class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownIdentifier };

  ParseError(Kind kind, std::size_t line, std::size_t column, std::vector<std::string> expected,
             std::string found);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
  std::string found_;
};

std::string print(const Term& t);
std::string print(const Formula& phi);

Term parse_term(std::string_view text);
Formula parse_formula(std::string_view text);

}  // namespace quotdef
