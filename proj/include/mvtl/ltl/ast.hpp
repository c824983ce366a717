#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mvtl::ltl {

enum class Kind {
  True,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
};

/// Arity required by each node kind.
std::size_t arity(Kind kind);
const char* kind_name(Kind kind);

/// Syntax tree of an LTL formula. Plain value type; children are owned.
struct LtlAst {
  Kind kind = Kind::True;
  std::string atom;             // set iff kind == Atom
  std::vector<LtlAst> children;

  static LtlAst truth();
  static LtlAst make_atom(std::string name);
  static LtlAst unary(Kind kind, LtlAst operand);
  static LtlAst binary(Kind kind, LtlAst lhs, LtlAst rhs);

  /// Checks the arity invariant recursively.
  bool well_formed() const;

  /// Fully parenthesized ASCII rendering that parses back to the same tree.
  std::string to_string() const;

  bool operator==(const LtlAst&) const = default;
};

/// Builder shorthands, mostly for tests and the formula library.
LtlAst atom(std::string name);
LtlAst not_(LtlAst f);
LtlAst and_(LtlAst a, LtlAst b);
LtlAst or_(LtlAst a, LtlAst b);
LtlAst implies(LtlAst a, LtlAst b);
LtlAst next(LtlAst f);
LtlAst until(LtlAst a, LtlAst b);
LtlAst eventually(LtlAst f);
LtlAst always(LtlAst f);

/// Collects atom names in first-occurrence order.
std::vector<std::string> atoms_of(const LtlAst& f);

}  // namespace mvtl::ltl
