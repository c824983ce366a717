#include "mvtl/ltl/symbol.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvtl::ltl {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxAtoms) {
    throw std::invalid_argument("alphabet exceeds " + std::to_string(kMaxAtoms) + " atoms");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw std::invalid_argument("empty atom name");
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate atom '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Alphabet::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Symbol Alphabet::symbol(std::initializer_list<std::string_view> atoms) const {
  Symbol s;
  for (auto a : atoms) {
    auto i = index_of(a);
    if (!i) throw std::invalid_argument("unknown atom '" + std::string(a) + "'");
    s = s.with(*i);
  }
  return s;
}

Symbol Alphabet::symbol(const std::vector<std::string>& atoms) const {
  Symbol s;
  for (const auto& a : atoms) {
    auto i = index_of(a);
    if (!i) throw std::invalid_argument("unknown atom '" + a + "'");
    s = s.with(*i);
  }
  return s;
}

Symbol Alphabet::all() const {
  if (names_.size() == 32) return Symbol(0xffffffffu);
  return Symbol((1u << names_.size()) - 1u);
}

std::string Alphabet::format(Symbol s) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ",";
    out += names_[i];
    first = false;
  }
  return out + "}";
}

std::vector<std::uint8_t> eval_symbol(Symbol sigma, const Alphabet& ap) {
  std::vector<std::uint8_t> v(ap.size(), 0);
  for (std::size_t i = 0; i < ap.size(); ++i) v[i] = sigma.contains(i) ? 1 : 0;
  return v;
}

}  // namespace mvtl::ltl
