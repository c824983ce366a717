#include <doctest.h>

#include <numeric>
#include <random>

#include "mvtl/decomposition/decompose.hpp"
#include "mvtl/planner/tl_rrt_star.hpp"
#include "oracles.hpp"

using namespace mvtl;
using namespace mvtl::decomposition;
using planner::EdgeCost;
using planner::LassoPlan;
using planner::ProductState;
using mvtl::testing::load_scenario_file;

namespace {

// Hand-built lasso: x runs along the integers, q follows the given sequences.
LassoPlan hand_plan(const std::vector<StateId>& prefix_q, const std::vector<StateId>& suffix_q) {
  LassoPlan p;
  double x = 0;
  for (StateId q : prefix_q) p.prefix.push_back({{x++, 0, 0}, q});
  p.suffix.push_back(p.prefix.back());
  for (std::size_t i = 1; i < suffix_q.size(); ++i) p.suffix.push_back({{x++, 0, 0}, suffix_q[i]});
  for (std::size_t i = 0; i + 1 < p.prefix.size(); ++i) {
    p.prefix_costs.push_back({1.0, p.prefix[i].q != p.prefix[i + 1].q ? 1u : 0u});
  }
  for (std::size_t i = 0; i < p.suffix.size(); ++i) {
    const auto& a = p.suffix[i];
    const auto& b = p.suffix[(i + 1) % p.suffix.size()];
    p.suffix_costs.push_back({geometry::dist(a.x, b.x), a.q != b.q ? 2u : 0u});
  }
  p.recompute_totals();
  return p;
}

std::vector<StateId> qs(const std::vector<ReachAvoidTask>& tasks) {
  std::vector<StateId> out;
  for (const auto& t : tasks) out.push_back(t.q);
  return out;
}

std::vector<std::size_t> sizes(const std::vector<ReachAvoidTask>& tasks) {
  std::vector<std::size_t> out;
  for (const auto& t : tasks) out.push_back(t.waypoints.size());
  return out;
}

}  // namespace

TEST_CASE("runs of constant automaton state become tasks") {
  const LassoPlan p = hand_plan({0, 0, 0, 1, 1, 2}, {2, 2, 3, 3});
  const TaskLasso t = decompose(p, 0.5);
  CHECK(qs(t.prefix_tasks) == std::vector<StateId>{0, 1, 2});
  CHECK(sizes(t.prefix_tasks) == std::vector<std::size_t>{3, 2, 1});
  CHECK(qs(t.suffix_tasks) == std::vector<StateId>{2, 3});
  CHECK(sizes(t.suffix_tasks) == std::vector<std::size_t>{2, 2});
  CHECK(t.size() == 5);
  for (std::size_t i = 0; i < t.all().size(); ++i) {
    CHECK(t.all()[i]->index == i);
    CHECK(t.all()[i]->radius == 0.5);
  }
  CHECK(!t.prefix_tasks[0].is_suffix);
  CHECK(t.suffix_tasks[0].is_suffix);
  // The handover points follow the path: each task ends where the next one's
  // first waypoint is one step further.
  CHECK(t.prefix_tasks[0].goal() == geometry::Vec{2, 0, 0});
  CHECK(t.prefix_tasks[1].waypoints.front() == geometry::Vec{3, 0, 0});
  CHECK(t.prefix_tasks[2].goal() == t.suffix_tasks[0].waypoints.front());
}

TEST_CASE("task violations cover the leaving transition") {
  const LassoPlan p = hand_plan({0, 0, 0, 1, 1, 2}, {2, 2, 3, 3});
  const TaskLasso t = decompose(p, 0.5);
  CHECK(t.prefix_tasks[0].violation == 1);
  CHECK(t.prefix_tasks[1].violation == 1);
  CHECK(t.prefix_tasks[2].violation == 0);  // accepting point, no outgoing edge in the prefix
  CHECK(t.suffix_tasks[0].violation == 2);
  CHECK(t.suffix_tasks[1].violation == 2);  // closing edge back to q2
  std::uint64_t prefix = 0, suffix = 0;
  for (const auto& x : t.prefix_tasks) prefix += x.violation;
  for (const auto& x : t.suffix_tasks) suffix += x.violation;
  CHECK(prefix == p.prefix_violation);
  CHECK(suffix == p.suffix_violation);
}

TEST_CASE("stationary suffix gives a single-waypoint task") {
  LassoPlan p = hand_plan({0, 1}, {1});
  const TaskLasso t = decompose(p, 1.0);
  REQUIRE(t.suffix_tasks.size() == 1);
  CHECK(t.suffix_tasks[0].waypoints.size() == 1);
  CHECK(t.suffix_tasks[0].length() == 0);
  CHECK(t.suffix_tasks[0].dist_to_go == std::vector<double>{0.0});
}

TEST_CASE("attach_dist accumulates remaining path length") {
  ReachAvoidTask t;
  t.waypoints = {{0, 0, 0}, {3, 4, 0}, {3, 5, 0}, {3, 5, 0}};
  t = attach_dist(t);
  CHECK(t.dist_to_go == std::vector<double>{6.0, 1.0, 0.0, 0.0});
  CHECK(t.length() == 6.0);
  ReachAvoidTask one;
  one.waypoints = {{1, 1, 0}};
  CHECK(attach_dist(one).dist_to_go == std::vector<double>{0.0});
  CHECK_THROWS_AS(attach_dist(ReachAvoidTask{}), std::invalid_argument);
}

TEST_CASE("decompose rejects bad input") {
  const LassoPlan p = hand_plan({0, 1}, {1, 1});
  CHECK_THROWS_AS(decompose(p, 0), std::invalid_argument);
  LassoPlan empty = p;
  empty.suffix.clear();
  CHECK_THROWS_AS(decompose(empty, 1), std::invalid_argument);
}

TEST_CASE("flattened tasks reproduce the plan path") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> len(1, 12), step(0, 3);
    std::vector<StateId> pre{0};
    for (int i = len(rng); i > 0; --i) pre.push_back(pre.back() + (step(rng) == 0 ? 1 : 0));
    std::vector<StateId> suf{pre.back()};
    for (int i = len(rng) - 1; i > 0; --i) suf.push_back(suf.back() + (step(rng) == 0 ? 1 : 0));
    const LassoPlan p = hand_plan(pre, suf);
    const TaskLasso t = decompose(p, 0.3);
    REQUIRE(flatten(t) == plan_path(p));
    for (const auto* task : t.all()) {
      REQUIRE(!task->waypoints.empty());
      REQUIRE(task->dist_to_go.size() == task->waypoints.size());
      REQUIRE(task->dist_to_go.back() == 0.0);
    }
    // Consecutive tasks differ in automaton state within each part.
    for (std::size_t i = 1; i < t.prefix_tasks.size(); ++i) {
      REQUIRE(t.prefix_tasks[i].q != t.prefix_tasks[i - 1].q);
    }
  }
}

TEST_CASE("task JSON round trip") {
  const LassoPlan p = hand_plan({0, 0, 1, 2, 2}, {2, 3, 3});
  const TaskLasso t = decompose(p, 0.7);
  const auto j = tasks_to_json(t, 2);
  const TaskLasso back = tasks_from_json(j, 2);
  CHECK(tasks_to_json(back, 2) == j);
  CHECK(flatten(back) == flatten(t));
  auto broken = j;
  broken["tasks"][0].erase("waypoints");
  CHECK_THROWS_AS(tasks_from_json(broken, 2), std::runtime_error);
}

TEST_CASE("segment violations agree with the planned costs") {
  for (const char* name : {"corridor", "enclosed_adjacent", "enclosed_g3"}) {
    CAPTURE(name);
    const auto sc = load_scenario_file(name);
    planner::PlannerParams pp;
    pp.eta = sc.eta;
    pp.max_iters = 4000;
    const LassoPlan plan = planner::plan_lasso(sc.ws, sc.nba, pp);
    const TaskLasso t = decompose(plan, 2 * sc.eta);
    const SegmentViolations sv = segment_violations(plan, sc.nba, sc.ws);
    REQUIRE(sv.prefix.size() == t.prefix_tasks.size());
    REQUIRE(sv.suffix.size() == t.suffix_tasks.size());
    for (std::size_t i = 0; i < sv.prefix.size(); ++i) CHECK(sv.prefix[i] == t.prefix_tasks[i].violation);
    for (std::size_t i = 0; i < sv.suffix.size(); ++i) CHECK(sv.suffix[i] == t.suffix_tasks[i].violation);
    CHECK(std::accumulate(sv.prefix.begin(), sv.prefix.end(), std::uint64_t{0}) == plan.prefix_violation);
    CHECK(std::accumulate(sv.suffix.begin(), sv.suffix.end(), std::uint64_t{0}) == plan.suffix_violation);
  }
}
