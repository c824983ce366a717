#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvtl::ltl {

/// Upper bound on |AP|; symbols are packed into a 32-bit mask.
inline constexpr std::size_t kMaxAtoms = 32;

/// Exhaustive symbol enumeration (2^|AP|) is only attempted up to this size.
inline constexpr std::size_t kMaxEnumerableAtoms = 16;

/// A letter of the alphabet 2^AP, stored as a bitmask over the AP order.
class Symbol {
 public:
  constexpr Symbol() = default;
  constexpr explicit Symbol(std::uint32_t bits) : bits_(bits) {}

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(std::size_t atom) const { return (bits_ >> atom) & 1u; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr Symbol with(std::size_t atom) const { return Symbol(bits_ | (1u << atom)); }
  constexpr Symbol operator|(Symbol o) const { return Symbol(bits_ | o.bits_); }

  constexpr bool operator==(const Symbol&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

/// The ordered atomic-proposition set AP = (mu_1, ..., mu_M).
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  Alphabet(std::initializer_list<std::string> names)
      : Alphabet(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  /// Symbol containing the named atoms; throws std::invalid_argument on unknown names.
  Symbol symbol(std::initializer_list<std::string_view> atoms) const;
  Symbol symbol(const std::vector<std::string>& atoms) const;
  Symbol all() const;

  /// "{G1,O}" style rendering.
  std::string format(Symbol s) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
};

/// Eval(sigma): bit i is 1 iff mu_i is in sigma.
std::vector<std::uint8_t> eval_symbol(Symbol sigma, const Alphabet& ap);

/// L1 distance between the Eval vectors, i.e. |sigma xor sigma'|.
constexpr std::uint32_t rho(Symbol a, Symbol b) {
  return static_cast<std::uint32_t>(std::popcount(a.bits() ^ b.bits()));
}

/// Sentinel returned by violation distances when no symbol can enable a transition.
inline constexpr std::uint32_t kInfiniteViolation = std::numeric_limits<std::uint32_t>::max();

}  // namespace mvtl::ltl
