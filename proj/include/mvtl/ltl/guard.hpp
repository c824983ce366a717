#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mvtl/ltl/ast.hpp"
#include "mvtl/ltl/symbol.hpp"

namespace mvtl::ltl {

/// Conjunction of literals: atoms in `pos` must hold, atoms in `neg` must not.
struct Cube {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;

  constexpr bool consistent() const { return (pos & neg) == 0; }
  constexpr bool holds(Symbol s) const {
    return (s.bits() & pos) == pos && (s.bits() & neg) == 0;
  }
  /// Hamming distance from `s` to the nearest symbol satisfying the cube.
  constexpr std::uint32_t distance(Symbol s) const {
    return static_cast<std::uint32_t>(std::popcount(pos & ~s.bits()) +
                                      std::popcount(neg & s.bits()));
  }
  /// True when every symbol satisfying *this also satisfies `weaker`.
  constexpr bool implies(const Cube& weaker) const {
    return (weaker.pos & ~pos) == 0 && (weaker.neg & ~neg) == 0;
  }
  constexpr std::size_t literal_count() const {
    return static_cast<std::size_t>(std::popcount(pos) + std::popcount(neg));
  }

  constexpr auto operator<=>(const Cube&) const = default;
};

/// Propositional formula over AP labelling an automaton edge.
///
/// The syntax tree is kept for rendering and direct evaluation; an equivalent
/// subsumption-free DNF is computed once at construction and backs the
/// distance queries.
class Guard {
 public:
  enum class Op { True, False, Atom, Not, And, Or };

  Guard();  // true

  static Guard truth();
  static Guard falsity();
  static Guard atom(std::size_t index);
  static Guard negate(Guard g);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);
  static Guard literal(std::size_t index, bool positive);
  /// Disjunction of cubes; an empty list is `false`.
  static Guard from_cubes(std::vector<Cube> cubes);

  Op op() const;
  std::size_t atom_index() const;
  const std::vector<Guard>& children() const;

  /// Evaluates the syntax tree directly (does not use the DNF).
  bool holds(Symbol s) const;

  const std::vector<Cube>& cubes() const;
  bool satisfiable() const { return !cubes().empty(); }
  /// Union of the atoms mentioned anywhere in the formula.
  std::uint32_t atom_mask() const;

  std::string to_string(const Alphabet& ap) const;

  /// Same canonical DNF (sound, not complete, as a semantic equality test).
  bool same_dnf(const Guard& other) const { return cubes() == other.cubes(); }

 private:
  struct Node;
  explicit Guard(std::shared_ptr<const Node> node);
  static Guard cube_term(const Cube& c);
  static Guard balanced_or(const std::vector<Cube>& cubes, std::size_t lo, std::size_t hi);
  std::shared_ptr<const Node> node_;
};

/// Sorts, deduplicates and removes cubes implied by another cube in the list.
std::vector<Cube> minimize_cubes(std::vector<Cube> cubes);

/// D_V(sigma, X): minimum rho(sigma, sigma') over symbols sigma' satisfying the
/// guard; 0 iff sigma satisfies it; kInfiniteViolation iff unsatisfiable.
std::uint32_t violation_distance(Symbol sigma, const Guard& guard);

/// Converts a temporal-operator-free formula. Throws std::invalid_argument on
/// temporal operators or atoms missing from `ap`.
Guard guard_from_ast(const LtlAst& ast, const Alphabet& ap);

/// Parses a guard in the ASCII LTL syntax (propositional fragment only).
Guard parse_guard(std::string_view text, const Alphabet& ap);

}  // namespace mvtl::ltl
