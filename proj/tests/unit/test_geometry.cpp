#include <doctest.h>

#include <random>

#include "mvtl/geometry/workspace.hpp"
#include "mvtl/io/json_io.hpp"
#include "oracles.hpp"

using namespace mvtl;
using namespace mvtl::geometry;
using mvtl::testing::brute_label;
using mvtl::testing::load_scenario_file;
using mvtl::testing::sampled_segment_free;

namespace {

Workspace small_workspace() {
  const ltl::Alphabet ap{"G1", "G2", "O"};
  std::vector<Region> regions{
      {0, Shape::ball({2, 2, 0}, 1.0, 2)},
      {1, Shape::box({6, 6, 0}, {8, 8, 0}, 2)},
  };
  std::vector<Shape> obstacles{
      Shape::box({4, 0, 0}, {5, 6, 0}, 2),
      Shape::ball({7, 2, 0}, 0.75, 2),
  };
  return Workspace(2, Box{{0, 0, 0}, {10, 10, 0}}, ap, regions, obstacles, {1, 1, 0}, 2);
}

Vec uniform_in(const Box& b, std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec v;
  for (int i = 0; i < dim; ++i) v[i] = b.min[i] + (b.max[i] - b.min[i]) * u(rng);
  return v;
}

}  // namespace

TEST_CASE("shapes are closed sets") {
  const Shape box = Shape::box({0, 0, 0}, {1, 1, 0}, 2);
  CHECK(box.contains({0, 0, 0}));
  CHECK(box.contains({1, 0.5, 0}));
  CHECK(!box.contains({1.0000001, 0.5, 0}));
  const Shape ball = Shape::ball({0, 0, 0}, 1, 2);
  CHECK(ball.contains({1, 0, 0}));
  CHECK(!ball.contains({0.8, 0.61, 0}));
  CHECK(ball.distance({3, 0, 0}) == doctest::Approx(2));
  CHECK(box.distance({0.5, 0.5, 0}) == 0);
  CHECK(box.distance({2, 2, 0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(Shape::box({0, 0, 0}, {0, 1, 0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(Shape::ball({0, 0, 0}, 0, 2), std::invalid_argument);
}

TEST_CASE("3D shapes use the z axis") {
  const Shape box = Shape::box({0, 0, 0}, {1, 1, 1}, 3);
  CHECK(box.contains({0.5, 0.5, 1}));
  CHECK(!box.contains({0.5, 0.5, 1.5}));
  const Shape ball = Shape::ball({0, 0, 0}, 1, 3);
  CHECK(!ball.contains({0.6, 0.6, 0.6}));
  CHECK(ball.intersects_segment({-2, 0, 0.5}, {2, 0, 0.5}));
  CHECK(!ball.intersects_segment({-2, 0, 1.5}, {2, 0, 1.5}));
}

TEST_CASE("labels combine regions and the obstacle atom") {
  const Workspace ws = small_workspace();
  const auto& ap = ws.alphabet();
  CHECK(ws.label_of({2, 2, 0}) == ap.symbol({"G1"}));
  CHECK(ws.label_of({3, 2, 0}) == ap.symbol({"G1"}));
  CHECK(ws.label_of({7, 7, 0}) == ap.symbol({"G2"}));
  CHECK(ws.label_of({4.5, 3, 0}) == ap.symbol({"O"}));
  CHECK(ws.label_of({9, 9, 0}) == ltl::Symbol());
  CHECK_THROWS_AS(ws.label_of({11, 0, 0}), std::out_of_range);
}

TEST_CASE("labels match a brute-force scan") {
  const Workspace ws = small_workspace();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100000; ++i) {
    const Vec p = uniform_in(ws.bounds(), rng, 2);
    REQUIRE(ws.label_of(p) == brute_label(ws, p));
  }
}

TEST_CASE("segment tests count boundary contact as collision") {
  const Workspace ws = small_workspace();
  CHECK(!ws.segment_collision_free({3, 1, 0}, {4, 1, 0}));   // ends on the wall face
  CHECK(!ws.segment_collision_free({4, 6, 0}, {4, 7, 0}));   // starts at the corner
  CHECK(!ws.segment_collision_free({3, 6, 0}, {6, 6, 0}));   // grazes the top edge
  CHECK(ws.segment_collision_free({3, 6.001, 0}, {6, 6.001, 0}));
  CHECK(!ws.segment_collision_free({6.25, 1, 0}, {6.25, 3, 0}));  // tangent to the disc
  CHECK(ws.segment_collision_free({6.2, 1, 0}, {6.2, 3, 0}));
  CHECK(ws.segment_collision_free({1, 1, 0}, {1, 1, 0}));
}

TEST_CASE("segment tests are symmetric and agree with sampling") {
  const Workspace ws = small_workspace();
  const double eta = 1.0;
  const double resolution = eta / 1000;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  int disagreements = 0;
  for (int i = 0; i < 100000; ++i) {
    const Vec a = uniform_in(ws.bounds(), rng, 2);
    Vec b = a + Vec{dir(rng), dir(rng), 0} * (eta / std::sqrt(2.0));
    b.x = std::clamp(b.x, 0.0, 10.0);
    b.y = std::clamp(b.y, 0.0, 10.0);
    const bool exact = ws.segment_collision_free(a, b);
    REQUIRE(exact == ws.segment_collision_free(b, a));
    const bool sampled = sampled_segment_free(ws, a, b, resolution);
    if (!sampled) {
      REQUIRE(!exact);  // sampling never invents a collision
    } else if (!exact) {
      // Only a graze thinner than the sampling step may slip through.
      double closest = 1e9;
      const auto n = static_cast<int>(std::ceil(dist(a, b) / resolution));
      for (int k = 0; k <= n; ++k) {
        const Vec p = a + (b - a) * (n ? static_cast<double>(k) / n : 0.0);
        for (const auto& o : ws.obstacles()) closest = std::min(closest, o.distance(p));
      }
      REQUIRE(closest <= resolution);
      ++disagreements;
    }
  }
  CHECK(disagreements < 100);
}

TEST_CASE("abstraction transitions respect the step bound") {
  const Workspace ws = small_workspace();
  CHECK(ws.gwts_transition({1, 1, 0}, {1.6, 1.8, 0}, 1.0));
  CHECK(!ws.gwts_transition({1, 1, 0}, {1.7, 1.8, 0}, 1.0));
  CHECK(!ws.gwts_transition({3.5, 1, 0}, {4.2, 1, 0}, 1.0));
  CHECK(ws.gwts_transition({1, 1, 0}, {1, 1, 0}, 1.0));
}

TEST_CASE("workspace validation") {
  const ltl::Alphabet ap{"G1", "O"};
  const Box bounds{{0, 0, 0}, {10, 10, 0}};
  CHECK_THROWS_AS(Workspace(2, bounds, ap, {}, {}, {11, 1, 0}, 1), ScenarioError);
  CHECK_THROWS_AS(Workspace(2, bounds, ap, {{0, Shape::ball({9.5, 5, 0}, 1, 2)}}, {}, {1, 1, 0}, 1),
                  ScenarioError);
  CHECK_THROWS_AS(Workspace(2, bounds, ap, {{5, Shape::ball({5, 5, 0}, 1, 2)}}, {}, {1, 1, 0}, 1),
                  ScenarioError);
  CHECK_THROWS_AS(Workspace(2, bounds, ap, {}, {}, {1, 1, 0}, 4), ScenarioError);
}

TEST_CASE("with_obstacles replaces only the obstacles") {
  const Workspace ws = small_workspace();
  const Workspace open = ws.with_obstacles({});
  CHECK(open.obstacles().empty());
  CHECK(open.regions().size() == ws.regions().size());
  CHECK(open.segment_collision_free({3, 1, 0}, {6, 1, 0}));
  CHECK(open.label_of({4.5, 3, 0}) == ltl::Symbol());
}

TEST_CASE("scenario JSON round trip") {
  for (const char* name : {"corridor", "enclosed_g3", "multi_goal", "two_enclosed", "sealed_start"}) {
    CAPTURE(name);
    const auto j = io::read_json(testing::scenario_path(name));
    const Workspace ws = workspace_from_json(j);
    const Workspace back = workspace_from_json(workspace_to_json(ws));
    CHECK(workspace_to_json(back) == workspace_to_json(ws));
    CHECK(back.alphabet() == ws.alphabet());
    CHECK(back.x0() == ws.x0());
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
      const Vec p = uniform_in(ws.bounds(), rng, ws.dimension());
      REQUIRE(back.label_of(p) == ws.label_of(p));
      REQUIRE(ws.label_of(p) == brute_label(ws, p));
    }
  }
}

TEST_CASE("scenario JSON errors name the field") {
  auto j = io::read_json(testing::scenario_path("corridor"));
  auto missing = j;
  missing.erase("bounds");
  try {
    workspace_from_json(missing);
    FAIL("expected a scenario error");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("bounds") != std::string::npos);
  }
  auto bad_label = j;
  bad_label["regions"][0]["label"] = "G9";
  try {
    workspace_from_json(bad_label);
    FAIL("expected a scenario error");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("G9") != std::string::npos);
  }
  auto bad_shape = j;
  bad_shape["obstacles"][0]["type"] = "polygon";
  CHECK_THROWS_AS(workspace_from_json(bad_shape), ScenarioError);
  auto bad_vec = j;
  bad_vec["init"] = nlohmann::json::array({1});
  CHECK_THROWS_AS(workspace_from_json(bad_vec), ScenarioError);
  CHECK_THROWS_AS(io::parse_json("{\"a\": [1,}", "inline"), io::JsonParseError);
}

TEST_CASE("shipped scenarios load with their formulas") {
  for (const char* name : {"corridor", "enclosed_g3", "enclosed_g3_open", "enclosed_adjacent",
                           "enclosed_adjacent_open", "multi_goal", "two_enclosed",
                           "two_enclosed_open", "sealed_start"}) {
    CAPTURE(name);
    const auto sc = load_scenario_file(name);
    CHECK(sc.nba.num_states() > 0);
    CHECK(sc.eta > 0);
  }
  CHECK(load_scenario_file("sealed_start").ws.in_obstacle(load_scenario_file("sealed_start").ws.x0()));
}
