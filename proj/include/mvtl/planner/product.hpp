#pragma once

#include <cstdint>
#include <optional>

#include "mvtl/geometry/workspace.hpp"
#include "mvtl/ltl/nba.hpp"

namespace mvtl::planner {

using geometry::Vec;
using ltl::StateId;

/// State of the relaxed product of the workspace abstraction and the automaton.
struct ProductState {
  Vec x;
  StateId q = 0;

  bool operator==(const ProductState&) const = default;
};

struct EdgeCost {
  double geom = 0;           // Euclidean length
  std::uint32_t viol = 0;    // violation distance of the firing label
};

/// Cost of the relaxed product transition a -> b, or nullopt when the
/// geometric move is not a valid short collision-free segment or the
/// automaton has no edge a.q -> b.q. The label of the source point fires the
/// automaton edge; a mismatching label is admitted at positive violation.
std::optional<EdgeCost> product_edge(const ProductState& a, const ProductState& b,
                                     const ltl::Nba& nba, const geometry::Workspace& ws,
                                     double eta);

}  // namespace mvtl::planner
