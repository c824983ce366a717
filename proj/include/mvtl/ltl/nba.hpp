#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "mvtl/ltl/guard.hpp"
#include "mvtl/ltl/symbol.hpp"

namespace mvtl::ltl {

using StateId = std::uint32_t;

struct NbaEdge {
  StateId src = 0;
  Guard guard;
  StateId dst = 0;
};

/// Nondeterministic Buchi automaton over 2^AP with guard-labelled edges.
///
/// Parallel edges between the same pair of states are merged into one edge
/// whose guard is the disjunction; edges with unsatisfiable guards are dropped.
class Nba {
 public:
  Nba() = default;
  /// Throws std::invalid_argument when an endpoint or guard atom is out of range.
  Nba(Alphabet ap, std::size_t num_states, std::vector<StateId> initial,
      std::vector<StateId> accepting, std::vector<NbaEdge> edges);

  const Alphabet& alphabet() const { return ap_; }
  std::size_t num_states() const { return num_states_; }
  const std::vector<StateId>& initial() const { return initial_; }
  const std::vector<StateId>& accepting() const { return accepting_; }
  bool is_initial(StateId q) const;
  bool is_accepting(StateId q) const { return accepting_flag_.at(q); }

  const std::vector<NbaEdge>& edges() const { return edges_; }
  /// Indices into edges() leaving q, ordered by destination.
  const std::vector<std::size_t>& out_edges(StateId q) const { return out_.at(q); }
  /// The unique edge q -> q', or nullptr.
  const NbaEdge* edge(StateId from, StateId to) const;
  bool has_edge(StateId from, StateId to) const { return edge(from, to) != nullptr; }

  std::vector<StateId> successors(StateId q) const;
  std::vector<StateId> predecessors(StateId q) const;

 private:
  Alphabet ap_;
  std::size_t num_states_ = 0;
  std::vector<StateId> initial_;
  std::vector<StateId> accepting_;
  std::vector<bool> accepting_flag_;
  std::vector<NbaEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::int32_t> lookup_;  // num_states^2, -1 when absent
};

/// {"ap", "states", "initial", "accepting", "edges": [{"src", "guard", "dst"}]}
/// with guards in the ASCII formula syntax.
nlohmann::json nba_to_json(const Nba& nba);

}  // namespace mvtl::ltl
