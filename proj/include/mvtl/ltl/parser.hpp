#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvtl/ltl/ast.hpp"
#include "mvtl/ltl/symbol.hpp"

namespace mvtl::ltl {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UndeclaredAtomError : public std::runtime_error {
 public:
  UndeclaredAtomError(std::string atom, std::size_t position);
  const std::string& atom() const { return atom_; }
  std::size_t position() const { return position_; }

 private:
  std::string atom_;
  std::size_t position_;
};

struct ParseWarning {
  std::size_t position;
  std::string message;
};

/// Parses ASCII LTL: true false ! && || -> X U <> [] and parentheses.
///
/// Precedence from tightest: unary (! X <> []), U, &&, ||, ->. Both U and ->
/// associate to the right. Every atom must be declared in `ap`. Uses of X are
/// accepted and reported through `warnings` when given, since a next-step
/// obligation has no direct meaning for continuous-time execution.
LtlAst parse_ltl(std::string_view text, const Alphabet& ap,
                 std::vector<ParseWarning>* warnings = nullptr);

}  // namespace mvtl::ltl
