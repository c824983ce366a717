#pragma once

#include <cstddef>

#include "mvtl/ltl/ast.hpp"
#include "mvtl/ltl/nba.hpp"

namespace mvtl::ltl {

struct TranslationStats {
  std::size_t tableau_states = 0;     // obligation sets explored
  std::size_t acceptance_sets = 0;    // until-subformulas that can be postponed
  std::size_t raw_states = 0;         // reachable degeneralized states
  std::size_t final_states = 0;
};

/// Translates an LTL formula into an equivalent Buchi automaton.
///
/// The formula is put in negation normal form and expanded on the fly into a
/// transition-based generalized Buchi automaton whose states are sets of
/// pending obligations (one acceptance set per until-subformula). That
/// automaton is degeneralized with a level counter whose initial level is the
/// accepting one, then simplified: states that cannot reach an accepting cycle
/// are removed, acceptance is dropped from states on no cycle, and states with
/// identical outgoing behaviour are merged. State 0 is the initial state and
/// ids follow breadth-first order, so the result is deterministic.
Nba to_nba(const LtlAst& formula, const Alphabet& ap, TranslationStats* stats = nullptr);

}  // namespace mvtl::ltl
