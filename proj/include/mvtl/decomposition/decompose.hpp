#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "mvtl/planner/lasso_plan.hpp"

namespace mvtl::decomposition {

using geometry::Vec;
using ltl::StateId;

/// Reach-avoid sub-task: follow `waypoints` to the last one while the
/// automaton stays in `q`.
struct ReachAvoidTask {
  std::size_t index = 0;
  StateId q = 0;
  std::vector<Vec> waypoints;
  double radius = 0;                 // guidance ball radius around each waypoint
  std::vector<double> dist_to_go;    // path length from each waypoint to the goal
  bool is_suffix = false;
  /// Violation charged when the task completes: the transition leaving the
  /// goal plus any self-loop violations inside the segment.
  std::uint64_t violation = 0;

  const Vec& goal() const { return waypoints.back(); }
  double length() const { return dist_to_go.empty() ? 0.0 : dist_to_go.front(); }
};

struct TaskLasso {
  std::vector<ReachAvoidTask> prefix_tasks;
  std::vector<ReachAvoidTask> suffix_tasks;

  std::size_t size() const { return prefix_tasks.size() + suffix_tasks.size(); }
  /// Prefix tasks then suffix tasks.
  std::vector<const ReachAvoidTask*> all() const;
};

/// Splits each of the prefix and suffix state lists into maximal runs of
/// constant automaton state. Throws std::invalid_argument when r <= 0 or the
/// plan has no suffix.
TaskLasso decompose(const planner::LassoPlan& plan, double r);

/// Fills dist_to_go with the remaining path length along the waypoints.
ReachAvoidTask attach_dist(ReachAvoidTask task);

/// Per-task violation recomputed from the waypoint labels and automaton guards,
/// in task order (prefix tasks, then suffix tasks).
struct SegmentViolations {
  std::vector<std::uint64_t> prefix;
  std::vector<std::uint64_t> suffix;
};
SegmentViolations segment_violations(const planner::LassoPlan& plan, const ltl::Nba& nba,
                                     const geometry::Workspace& ws);

/// Geometric path of the plan: prefix points followed by suffix points.
std::vector<Vec> plan_path(const planner::LassoPlan& plan);
/// Concatenated task waypoints in the same order.
std::vector<Vec> flatten(const TaskLasso& tasks);

nlohmann::json tasks_to_json(const TaskLasso& tasks, int dimension);
TaskLasso tasks_from_json(const nlohmann::json& j, int dimension);

}  // namespace mvtl::decomposition
