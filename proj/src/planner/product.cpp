#include "mvtl/planner/product.hpp"

namespace mvtl::planner {

std::optional<EdgeCost> product_edge(const ProductState& a, const ProductState& b,
                                     const ltl::Nba& nba, const geometry::Workspace& ws,
                                     double eta) {
  const ltl::NbaEdge* e = nba.edge(a.q, b.q);
  if (!e) return std::nullopt;
  if (!ws.in_bounds(a.x) || !ws.in_bounds(b.x)) return std::nullopt;
  if (!ws.gwts_transition(a.x, b.x, eta)) return std::nullopt;
  return EdgeCost{geometry::dist(a.x, b.x), ltl::violation_distance(ws.label_of(a.x), e->guard)};
}

}  // namespace mvtl::planner
