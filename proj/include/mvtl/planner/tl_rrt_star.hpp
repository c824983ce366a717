#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mvtl/planner/lasso_plan.hpp"

namespace mvtl::planner {

struct PlannerParams {
  double eta = 1.0;             // maximum edge length
  double beta = 0.0;            // violation weight; <= 0 selects 1e4 * workspace diameter
  std::size_t max_iters = 30000;  // prefix tree iterations
  std::size_t suffix_iters = 0;   // per suffix tree; 0 means max_iters / n_roots
  std::uint64_t seed = 0;
  std::size_t n_roots = 3;
  double goal_bias = 0.1;       // probability of sampling inside a labelled region
  bool feasible_only = false;   // forbid transitions with positive violation
  bool audit = false;           // verify tree costs after every rewire (slow)
};

struct PlannerStats {
  std::size_t prefix_points = 0;
  std::size_t prefix_nodes = 0;
  std::size_t accepting_nodes = 0;
  std::vector<StateId> reached_states;  // automaton states present in the prefix tree
  std::size_t suffix_roots = 0;
  std::size_t closed_cycles = 0;        // suffix trees that closed a cycle
};

/// Raised when no lasso exists in the explored relaxed product.
class NoPlanError : public std::runtime_error {
 public:
  NoPlanError(const std::string& what, std::vector<StateId> reached)
      : std::runtime_error(what), reached_(std::move(reached)) {}
  const std::vector<StateId>& reached_states() const { return reached_; }

 private:
  std::vector<StateId> reached_;
};

double default_beta(const geometry::Workspace& ws);

/// Sampling-based search for a minimum-violation lasso.
///
/// A prefix tree over (point, automaton state) pairs is grown from (x0, q0)
/// minimising length + beta * violation with rewiring; nodes at the same
/// point may also be linked by stationary automaton moves. The best accepting
/// nodes (one per accepting automaton state first) seed suffix trees, each
/// searched for the cheapest transition back to its root. Deterministic for a
/// given seed. Throws NoPlanError when no accepting state or no cycle is found.
LassoPlan plan_lasso(const geometry::Workspace& ws, const ltl::Nba& nba,
                     const PlannerParams& params, PlannerStats* stats = nullptr);

}  // namespace mvtl::planner
