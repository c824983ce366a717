#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mvtl/geometry/vec.hpp"

namespace mvtl::planner {

/// Uniform hash grid over points for nearest and radius queries.
class SpatialIndex {
 public:
  /// `cell` should be about the typical query radius.
  SpatialIndex(geometry::Vec origin, double cell, int dimension);

  void insert(std::uint32_t id, const geometry::Vec& p);
  std::size_t size() const { return points_.size(); }
  const geometry::Vec& point(std::uint32_t id) const { return points_.at(id); }

  /// Nearest stored id; ties go to the lower id. nullopt when empty.
  std::optional<std::uint32_t> nearest(const geometry::Vec& p) const;
  /// Ids within distance r (inclusive), ascending.
  std::vector<std::uint32_t> within(const geometry::Vec& p, double r) const;

 private:
  using Key = std::int64_t;
  std::array<std::int64_t, 3> cell_of(const geometry::Vec& p) const;
  static Key key(const std::array<std::int64_t, 3>& c);

  geometry::Vec origin_;
  double cell_;
  int dim_;
  std::vector<geometry::Vec> points_;  // dense by id
  std::unordered_map<Key, std::vector<std::uint32_t>> cells_;
  std::array<std::int64_t, 3> lo_{0, 0, 0}, hi_{0, 0, 0};  // occupied cell range
};

}  // namespace mvtl::planner
