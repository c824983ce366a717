#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "mvtl/planner/product.hpp"

namespace mvtl::planner {

/// Prefix-suffix plan over the relaxed product.
///
/// `prefix` runs from (x0, q0) to an accepting product state, which is also
/// `suffix.front()`. The suffix is a cycle: after `suffix.back()` the plan
/// returns to `suffix.front()`. A single-element suffix is a stationary loop.
/// `prefix_costs[i]` is the cost of prefix[i] -> prefix[i+1];
/// `suffix_costs[i]` is the cost of suffix[i] -> suffix[(i+1) % size].
struct LassoPlan {
  std::vector<ProductState> prefix;
  std::vector<ProductState> suffix;
  std::vector<EdgeCost> prefix_costs;
  std::vector<EdgeCost> suffix_costs;
  std::uint64_t prefix_violation = 0;
  std::uint64_t suffix_violation = 0;
  double prefix_length = 0;
  double suffix_length = 0;
  std::uint64_t seed = 0;
  std::uint64_t iters = 0;

  double length() const { return prefix_length + suffix_length; }
  /// Recomputes the four totals from the per-edge costs.
  void recompute_totals();
};

/// Ranking used by the planner and the oracle: suffix violation, then prefix
/// violation, then total length.
using LassoKey = std::tuple<std::uint64_t, std::uint64_t, double>;
inline LassoKey lasso_key(const LassoPlan& p) {
  return {p.suffix_violation, p.prefix_violation, p.length()};
}

/// Weighted aggregate: prefix violation + beta * suffix violation.
double total_violation(const LassoPlan& plan, double beta);

/// Replays every transition with product_edge; returns a description of the
/// first problem or nullopt when the plan is a valid lasso with matching costs.
std::optional<std::string> check_plan(const LassoPlan& plan, const ltl::Nba& nba,
                                      const geometry::Workspace& ws, double eta);

nlohmann::json plan_to_json(const LassoPlan& plan, int dimension);
LassoPlan plan_from_json(const nlohmann::json& j, int dimension);

}  // namespace mvtl::planner
