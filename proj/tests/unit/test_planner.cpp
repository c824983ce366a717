#include <doctest.h>

#include <random>

#include "mvtl/ltl/parser.hpp"
#include "mvtl/ltl/translate.hpp"
#include "mvtl/planner/grid_oracle.hpp"
#include "mvtl/planner/spatial_index.hpp"
#include "mvtl/planner/tl_rrt_star.hpp"
#include "oracles.hpp"

using namespace mvtl;
using namespace mvtl::planner;
using geometry::Shape;
using geometry::Workspace;
using mvtl::testing::load_scenario_file;

namespace {

// Start at (1,1); G1 disc at (3,1); wall x in [5,6].
Workspace strip() {
  return Workspace(2, geometry::Box{{0, 0, 0}, {10, 4, 0}}, ltl::Alphabet{"G1", "O"},
                   {{0, Shape::ball({3, 1, 0}, 0.5, 2)}}, {Shape::box({5, 0, 0}, {6, 4, 0}, 2)},
                   {1, 1, 0}, 1);
}

ltl::Nba eventually_g1(const Workspace& ws) {
  return ltl::to_nba(ltl::parse_ltl("[]!O && <>G1", ws.alphabet()), ws.alphabet());
}

LassoPlan plan_with(const std::string& name, std::size_t iters, std::uint64_t seed,
                    bool feasible_only = false) {
  const auto sc = load_scenario_file(name);
  PlannerParams p;
  p.eta = sc.eta;
  p.max_iters = iters;
  p.seed = seed;
  p.feasible_only = feasible_only;
  return plan_lasso(sc.ws, sc.nba, p);
}

LassoPlan oracle_for(const std::string& name, bool feasible_only = false) {
  const auto sc = load_scenario_file(name);
  OracleParams op;
  op.eta = sc.eta;
  op.grid_step = 0.25;
  op.feasible_only = feasible_only;
  return grid_oracle_plan(sc.ws, sc.nba, op);
}

}  // namespace

TEST_CASE("product edges charge the label of the source point") {
  const Workspace ws = strip();
  const ltl::Nba nba = eventually_g1(ws);
  REQUIRE(nba.num_states() == 2);
  const double eta = 1.0;
  // Leaving the goal disc advances the automaton at no cost.
  auto e = product_edge({{3, 1, 0}, 0}, {{3.8, 1, 0}, 1}, nba, ws, eta);
  REQUIRE(e);
  CHECK(e->viol == 0);
  CHECK(e->geom == doctest::Approx(0.8));
  // Advancing from outside the goal costs one flipped atom.
  e = product_edge({{1, 1, 0}, 0}, {{1.5, 1, 0}, 1}, nba, ws, eta);
  REQUIRE(e);
  CHECK(e->viol == 1);
  // Waiting outside obstacles is free.
  e = product_edge({{1, 1, 0}, 0}, {{1.5, 1, 0}, 0}, nba, ws, eta);
  REQUIRE(e);
  CHECK(e->viol == 0);
  // Stationary automaton move.
  e = product_edge({{3, 1, 0}, 0}, {{3, 1, 0}, 1}, nba, ws, eta);
  REQUIRE(e);
  CHECK(e->geom == 0);
  CHECK(e->viol == 0);
  // Too long, blocked, or no automaton edge.
  CHECK(!product_edge({{1, 1, 0}, 0}, {{2.1, 1, 0}, 0}, nba, ws, eta));
  CHECK(!product_edge({{4.5, 1, 0}, 0}, {{5.2, 1, 0}, 0}, nba, ws, eta));
  CHECK(!product_edge({{3, 1, 0}, 1}, {{3, 1, 0}, 0}, nba, ws, eta));
}

TEST_CASE("product edges out of an obstacle are charged the obstacle atom") {
  const Workspace ws = strip();
  const ltl::Nba nba = eventually_g1(ws);
  // The wall interior is labelled O, which violates []!O on every edge.
  const auto e = product_edge({{5.5, 1, 0}, 0}, {{5.5, 1, 0}, 0}, nba, ws, 1.0);
  if (e) CHECK(e->viol >= 1);
}

TEST_CASE("weighted violation and ranking") {
  LassoPlan p;
  p.prefix_violation = 1;
  p.suffix_violation = 2;
  p.prefix_length = 3;
  p.suffix_length = 4;
  CHECK(total_violation(p, 10.0) == 21.0);
  CHECK(total_violation(p, 0.5) == 2.0);
  CHECK(p.length() == 7.0);
  LassoPlan q = p;
  q.suffix_violation = 1;
  q.prefix_violation = 5;
  q.prefix_length = 100;
  CHECK(lasso_key(q) < lasso_key(p));  // suffix violation dominates
  const Workspace ws = strip();
  CHECK(default_beta(ws) == doctest::Approx(1e4 * ws.diameter()));
}

TEST_CASE("check_plan accepts valid plans and reports corruption") {
  const Workspace ws = strip();
  const ltl::Nba nba = eventually_g1(ws);
  PlannerParams pp;
  pp.eta = 0.5;
  pp.max_iters = 2000;
  const LassoPlan plan = plan_lasso(ws, nba, pp);
  CHECK(!check_plan(plan, nba, ws, pp.eta));
  CHECK(plan.prefix.front().x == ws.x0());
  CHECK(plan.prefix.back() == plan.suffix.front());
  CHECK(plan.prefix_costs.size() + 1 == plan.prefix.size());
  CHECK(plan.suffix_costs.size() == plan.suffix.size());

  LassoPlan bad = plan;
  bad.prefix_costs.front().geom += 0.1;
  CHECK(check_plan(bad, nba, ws, pp.eta));
  bad = plan;
  bad.prefix_violation += 1;
  CHECK(check_plan(bad, nba, ws, pp.eta));
  bad = plan;
  bad.suffix.front().q = 0;
  CHECK(check_plan(bad, nba, ws, pp.eta));
  bad = plan;
  bad.prefix.front().x = {1.2, 1, 0};
  CHECK(check_plan(bad, nba, ws, pp.eta));
}

TEST_CASE("plan JSON round trip") {
  const LassoPlan plan = plan_with("enclosed_adjacent", 3000, 4);
  const LassoPlan back = plan_from_json(plan_to_json(plan, 2), 2);
  CHECK(back.prefix == plan.prefix);
  CHECK(back.suffix == plan.suffix);
  CHECK(lasso_key(back) == lasso_key(plan));
  CHECK(back.seed == plan.seed);
  CHECK(plan_to_json(back, 2) == plan_to_json(plan, 2));
  auto broken = plan_to_json(plan, 2);
  broken.erase("suffix");
  CHECK_THROWS(plan_from_json(broken, 2));
}

TEST_CASE("spatial index matches brute force") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int dim : {2, 3}) {
    SpatialIndex idx({-5, -5, -5}, 0.7, dim);
    std::vector<geometry::Vec> pts;
    CHECK(!idx.nearest({0, 0, 0}));
    for (std::uint32_t i = 0; i < 3000; ++i) {
      geometry::Vec p{u(rng), u(rng), dim == 3 ? u(rng) : 0.0};
      if (i % 50 == 0 && i > 0) p = pts[i / 2];  // duplicates exercise the tie rule
      pts.push_back(p);
      idx.insert(i, p);
    }
    for (int q = 0; q < 500; ++q) {
      const geometry::Vec x{u(rng) * 1.3, u(rng) * 1.3, dim == 3 ? u(rng) : 0.0};
      std::uint32_t best = 0;
      for (std::uint32_t i = 1; i < pts.size(); ++i) {
        if (geometry::dist(pts[i], x) < geometry::dist(pts[best], x)) best = i;
      }
      REQUIRE(idx.nearest(x) == best);
      const double r = 0.2 + 0.3 * (q % 5);
      std::vector<std::uint32_t> expect;
      for (std::uint32_t i = 0; i < pts.size(); ++i) {
        if (geometry::dist(pts[i], x) <= r) expect.push_back(i);
      }
      REQUIRE(idx.within(x, r) == expect);
    }
  }
}

TEST_CASE("corridor is solved without violation") {
  const LassoPlan plan = plan_with("corridor", 5000, 0);
  CHECK(plan.prefix_violation == 0);
  CHECK(plan.suffix_violation == 0);
  const auto sc = load_scenario_file("corridor");
  CHECK(!check_plan(plan, sc.nba, sc.ws, sc.eta));
}

TEST_CASE("planning is deterministic per seed") {
  const auto a = plan_to_json(plan_with("enclosed_adjacent", 3000, 11), 2);
  const auto b = plan_to_json(plan_with("enclosed_adjacent", 3000, 11), 2);
  CHECK(a.dump() == b.dump());
  const auto c = plan_to_json(plan_with("enclosed_adjacent", 3000, 12), 2);
  CHECK(a.dump() != c.dump());
}

TEST_CASE("a start inside an obstacle has no plan") {
  const auto sc = load_scenario_file("sealed_start");
  PlannerParams pp;
  pp.eta = sc.eta;
  pp.max_iters = 1000;
  CHECK_THROWS_AS(plan_lasso(sc.ws, sc.nba, pp), NoPlanError);
  CHECK_THROWS_AS(oracle_for("sealed_start"), NoPlanError);
}

TEST_CASE("feasible-only search fails on sealed goals and succeeds when open") {
  CHECK_THROWS_AS(plan_with("enclosed_g3", 2000, 0, true), NoPlanError);
  CHECK_THROWS_AS(oracle_for("enclosed_g3", true), NoPlanError);
  const LassoPlan open = oracle_for("corridor", true);
  CHECK(open.prefix_violation + open.suffix_violation == 0);
}

TEST_CASE("on an open surveillance layout both modes find violation-free plans") {
  const auto sc = load_scenario_file("enclosed_g3_open");
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    CAPTURE(seed);
    const LassoPlan feas = plan_with("enclosed_g3_open", 4000, seed, true);
    CHECK(feas.prefix_violation + feas.suffix_violation == 0);
    const auto bad = check_plan(feas, sc.nba, sc.ws, sc.eta);
    CHECK_MESSAGE(!bad, bad.value_or(""));
    const auto bad_r = check_plan(plan_with("enclosed_g3_open", 4000, seed), sc.nba, sc.ws, sc.eta);
    CHECK_MESSAGE(!bad_r, bad_r.value_or(""));
    const LassoPlan relaxed = plan_with("enclosed_g3_open", 4000, seed);
    CHECK(relaxed.prefix_violation + relaxed.suffix_violation == 0);
  }
}

TEST_CASE("oracle values on the shipped scenarios") {
  const auto sc = load_scenario_file("enclosed_adjacent");
  const LassoPlan adj = oracle_for("enclosed_adjacent");
  CHECK(adj.prefix_violation == 1);
  CHECK(adj.suffix_violation == 0);
  CHECK(!check_plan(adj, sc.nba, sc.ws, sc.eta));
  const LassoPlan g3 = oracle_for("enclosed_g3");
  CHECK(g3.prefix_violation == 0);
  CHECK(g3.suffix_violation == 1);
  const LassoPlan two = oracle_for("two_enclosed");
  CHECK(two.suffix_violation == 2);
  const LassoPlan corridor = oracle_for("corridor");
  CHECK(corridor.prefix_violation + corridor.suffix_violation == 0);
}

TEST_CASE("oracle refuses grids over budget and suggests a coarser step") {
  const auto sc = load_scenario_file("corridor");
  OracleParams op;
  op.eta = sc.eta;
  op.grid_step = 0.01;
  op.max_product_nodes = 20000;
  try {
    grid_oracle_plan(sc.ws, sc.nba, op);
    FAIL("expected GridTooLargeError");
  } catch (const GridTooLargeError& e) {
    CHECK(e.suggested_step() > op.grid_step);
    op.grid_step = e.suggested_step();
    OracleStats stats;
    CHECK_NOTHROW(grid_oracle_plan(sc.ws, sc.nba, op, &stats));
    CHECK(stats.product_nodes <= op.max_product_nodes);
  }
}

TEST_CASE("more iterations never worsen the plan") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CAPTURE(seed);
    const LassoPlan small = plan_with("corridor", 3000, seed);
    const LassoPlan large = plan_with("corridor", 30000, seed);
    CHECK(lasso_key(large) <= lasso_key(small));
  }
}

TEST_CASE("violation totals do not depend on beta once it dominates length") {
  const auto sc = load_scenario_file("enclosed_adjacent");
  PlannerParams pp;
  pp.eta = sc.eta;
  pp.max_iters = 4000;
  pp.seed = 3;
  const LassoPlan a = plan_lasso(sc.ws, sc.nba, pp);
  pp.beta = 1e9;
  const LassoPlan b = plan_lasso(sc.ws, sc.nba, pp);
  CHECK(a.prefix_violation == b.prefix_violation);
  CHECK(a.suffix_violation == b.suffix_violation);
}

TEST_CASE("tree costs stay consistent through rewiring") {
  const auto sc = load_scenario_file("enclosed_adjacent");
  PlannerParams pp;
  pp.eta = sc.eta;
  pp.max_iters = 600;
  pp.audit = true;
  PlannerStats stats;
  CHECK_NOTHROW(plan_lasso(sc.ws, sc.nba, pp, &stats));
  CHECK(stats.prefix_nodes >= stats.prefix_points);
}
