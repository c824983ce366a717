#pragma once

#include <random>
#include <variant>

#include "mvtl/geometry/vec.hpp"

namespace mvtl::geometry {

/// Closed axis-aligned box. In 2D the z extent is ignored.
struct Box {
  Vec min;
  Vec max;
};

/// Closed ball; in 2D a disc (z ignored).
struct Ball {
  Vec center;
  double radius = 0;
};

/// Region or obstacle geometry. All membership and intersection tests treat
/// the set as closed, so boundary contact counts.
class Shape {
 public:
  Shape(Box b, int dimension);
  Shape(Ball b, int dimension);

  /// Throws std::invalid_argument unless min < max on every used axis.
  static Shape box(Vec min, Vec max, int dimension) { return Shape(Box{min, max}, dimension); }
  /// Throws std::invalid_argument unless radius > 0.
  static Shape ball(Vec center, double radius, int dimension) {
    return Shape(Ball{center, radius}, dimension);
  }

  int dimension() const { return dim_; }
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }

  bool contains(const Vec& p) const;
  /// Exact test whether the closed segment [a,b] meets the shape.
  bool intersects_segment(const Vec& a, const Vec& b) const;
  /// Euclidean distance from p to the shape (0 inside).
  double distance(const Vec& p) const;
  /// Axis-aligned bounding box.
  Box bounding_box() const;
  /// Uniform sample from the shape.
  Vec sample(std::mt19937_64& rng) const;

 private:
  std::variant<Box, Ball> shape_;
  int dim_ = 2;
};

}  // namespace mvtl::geometry
