#pragma once

#include <stdexcept>

#include "mvtl/planner/lasso_plan.hpp"

namespace mvtl::planner {

struct OracleParams {
  double grid_step = 0.25;
  double eta = 1.0;                        // must be at least grid_step * sqrt(dimension)
  std::size_t max_product_nodes = 1000000;  // cells * automaton states
  bool feasible_only = false;
};

struct OracleStats {
  std::size_t cells = 0;             // free cells, excluding x0
  std::size_t product_nodes = 0;
  std::size_t accepting_reached = 0;
  std::size_t cycle_searches = 0;
};

/// Raised when the requested grid exceeds the node budget.
class GridTooLargeError : public std::runtime_error {
 public:
  GridTooLargeError(const std::string& what, double suggested_step)
      : std::runtime_error(what), suggested_step_(suggested_step) {}
  double suggested_step() const { return suggested_step_; }

 private:
  double suggested_step_;
};

/// Exact lexicographic-minimum lasso on a grid discretisation of the relaxed
/// product. Graph vertices are x0 and the free cell centres; edges join
/// neighbouring cells (8- or 26-neighbourhood) and x0 to nearby cells when the
/// segment is collision free, plus stationary automaton moves. Lassos are
/// ranked by (suffix violation, prefix violation, total length).
/// Throws NoPlanError (see tl_rrt_star.hpp) when no lasso exists and
/// GridTooLargeError when the grid is over budget.
LassoPlan grid_oracle_plan(const geometry::Workspace& ws, const ltl::Nba& nba,
                           const OracleParams& params, OracleStats* stats = nullptr);

}  // namespace mvtl::planner
