#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvtl/geometry/shape.hpp"
#include "mvtl/ltl/symbol.hpp"

namespace mvtl::geometry {

struct Region {
  std::size_t atom = 0;  // index into the workspace alphabet
  Shape shape;
};

/// Raised for malformed scenario descriptions.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Labelled workspace: bounds, labelled regions, obstacles and start point.
class Workspace {
 public:
  /// Validates that every shape and x0 lie inside the bounds and that region
  /// labels are in `ap`. `obstacle_atom`, when set, is added to the label of
  /// points inside obstacles.
  Workspace(int dimension, Box bounds, ltl::Alphabet ap, std::vector<Region> regions,
            std::vector<Shape> obstacles, Vec x0, std::optional<std::size_t> obstacle_atom);

  int dimension() const { return dim_; }
  const Box& bounds() const { return bounds_; }
  const ltl::Alphabet& alphabet() const { return ap_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<Shape>& obstacles() const { return obstacles_; }
  const Vec& x0() const { return x0_; }
  std::optional<std::size_t> obstacle_atom() const { return obstacle_atom_; }
  /// Length of the bounds diagonal.
  double diameter() const;

  bool in_bounds(const Vec& x) const;
  bool in_obstacle(const Vec& x) const;
  /// Throws std::out_of_range outside the bounds.
  ltl::Symbol label_of(const Vec& x) const;
  bool segment_collision_free(const Vec& a, const Vec& b) const;
  /// dist(a,b) <= eta and the segment is collision free.
  bool gwts_transition(const Vec& a, const Vec& b, double eta) const;
  /// Uniform sample over the bounds.
  Vec sample(std::mt19937_64& rng) const;

  /// Same workspace with its obstacles replaced.
  Workspace with_obstacles(std::vector<Shape> obstacles) const;

 private:
  int dim_;
  Box bounds_;
  ltl::Alphabet ap_;
  std::vector<Region> regions_;
  std::vector<Shape> obstacles_;
  Vec x0_;
  std::optional<std::size_t> obstacle_atom_;
};

/// Parses the scenario JSON layout; throws ScenarioError naming the field.
Workspace workspace_from_json(const nlohmann::json& j);
nlohmann::json workspace_to_json(const Workspace& ws);

Vec vec_from_json(const nlohmann::json& j, int dimension);
nlohmann::json vec_to_json(const Vec& v, int dimension);

}  // namespace mvtl::geometry
