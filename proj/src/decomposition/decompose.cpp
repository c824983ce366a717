#include "mvtl/decomposition/decompose.hpp"

#include <stdexcept>

namespace mvtl::decomposition {

std::vector<const ReachAvoidTask*> TaskLasso::all() const {
  std::vector<const ReachAvoidTask*> out;
  for (const auto& t : prefix_tasks) out.push_back(&t);
  for (const auto& t : suffix_tasks) out.push_back(&t);
  return out;
}

ReachAvoidTask attach_dist(ReachAvoidTask task) {
  if (task.waypoints.empty()) throw std::invalid_argument("task has no waypoints");
  const std::size_t n = task.waypoints.size();
  task.dist_to_go.assign(n, 0.0);
  for (std::size_t j = n - 1; j-- > 0;) {
    task.dist_to_go[j] = task.dist_to_go[j + 1] + geometry::dist(task.waypoints[j], task.waypoints[j + 1]);
  }
  return task;
}

namespace {

/// Runs of equal q; `costs[i]` is the edge leaving states[i] (may be one
/// shorter than states when the list is not cyclic).
std::vector<ReachAvoidTask> split(const std::vector<planner::ProductState>& states,
                                  const std::vector<planner::EdgeCost>& costs, double r,
                                  bool is_suffix, std::size_t first_index) {
  std::vector<ReachAvoidTask> tasks;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (tasks.empty() || tasks.back().q != states[i].q) {
      ReachAvoidTask t;
      t.index = first_index + tasks.size();
      t.q = states[i].q;
      t.radius = r;
      t.is_suffix = is_suffix;
      tasks.push_back(std::move(t));
    }
    tasks.back().waypoints.push_back(states[i].x);
    if (i < costs.size()) tasks.back().violation += costs[i].viol;
  }
  for (auto& t : tasks) t = attach_dist(std::move(t));
  return tasks;
}

}  // namespace

TaskLasso decompose(const planner::LassoPlan& plan, double r) {
  if (!(r > 0)) throw std::invalid_argument("ball radius must be positive");
  if (plan.suffix.empty()) throw std::invalid_argument("plan has an empty suffix");
  TaskLasso out;
  out.prefix_tasks = split(plan.prefix, plan.prefix_costs, r, false, 0);
  out.suffix_tasks = split(plan.suffix, plan.suffix_costs, r, true, out.prefix_tasks.size());
  return out;
}

SegmentViolations segment_violations(const planner::LassoPlan& plan, const ltl::Nba& nba,
                                     const geometry::Workspace& ws) {
  auto charge = [&](const planner::ProductState& from, const planner::ProductState& to) {
    const ltl::NbaEdge* e = nba.edge(from.q, to.q);
    if (!e) throw std::invalid_argument("plan uses a transition missing from the automaton");
    return static_cast<std::uint64_t>(ltl::violation_distance(ws.label_of(from.x), e->guard));
  };
  auto run = [&](const std::vector<planner::ProductState>& s, bool cyclic) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i == 0 || s[i].q != s[i - 1].q) out.push_back(0);
      const bool has_next = i + 1 < s.size() || cyclic;
      if (has_next) out.back() += charge(s[i], s[(i + 1) % s.size()]);
    }
    return out;
  };
  return SegmentViolations{run(plan.prefix, false), run(plan.suffix, true)};
}

std::vector<Vec> plan_path(const planner::LassoPlan& plan) {
  std::vector<Vec> out;
  for (const auto& s : plan.prefix) out.push_back(s.x);
  for (const auto& s : plan.suffix) out.push_back(s.x);
  return out;
}

std::vector<Vec> flatten(const TaskLasso& tasks) {
  std::vector<Vec> out;
  for (const ReachAvoidTask* t : tasks.all()) {
    out.insert(out.end(), t->waypoints.begin(), t->waypoints.end());
  }
  return out;
}

nlohmann::json tasks_to_json(const TaskLasso& tasks, int dimension) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReachAvoidTask* t : tasks.all()) {
    nlohmann::json w = nlohmann::json::array();
    for (const Vec& v : t->waypoints) w.push_back(geometry::vec_to_json(v, dimension));
    arr.push_back({{"index", t->index},
                   {"q", t->q},
                   {"waypoints", std::move(w)},
                   {"dist_to_go", t->dist_to_go},
                   {"r", t->radius},
                   {"is_suffix", t->is_suffix},
                   {"violation", t->violation}});
  }
  return {{"version", 1}, {"tasks", std::move(arr)}};
}

TaskLasso tasks_from_json(const nlohmann::json& j, int dimension) {
  TaskLasso out;
  try {
    for (const auto& tj : j.at("tasks")) {
      ReachAvoidTask t;
      t.index = tj.at("index").get<std::size_t>();
      t.q = tj.at("q").get<StateId>();
      for (const auto& w : tj.at("waypoints")) t.waypoints.push_back(geometry::vec_from_json(w, dimension));
      t.radius = tj.at("r").get<double>();
      t.is_suffix = tj.at("is_suffix").get<bool>();
      t.violation = tj.value("violation", std::uint64_t{0});
      t = attach_dist(std::move(t));
      (t.is_suffix ? out.suffix_tasks : out.prefix_tasks).push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed task file: ") + e.what());
  }
  return out;
}

}  // namespace mvtl::decomposition
