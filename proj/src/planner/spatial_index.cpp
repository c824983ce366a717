#include "mvtl/planner/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvtl::planner {

SpatialIndex::SpatialIndex(geometry::Vec origin, double cell, int dimension)
    : origin_(origin), cell_(cell), dim_(dimension) {
  if (!(cell > 0)) throw std::invalid_argument("spatial index cell size must be positive");
}

std::array<std::int64_t, 3> SpatialIndex::cell_of(const geometry::Vec& p) const {
  std::array<std::int64_t, 3> c{0, 0, 0};
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
    c[i] = static_cast<std::int64_t>(std::floor((p[i] - origin_[i]) / cell_));
  }
  return c;
}

SpatialIndex::Key SpatialIndex::key(const std::array<std::int64_t, 3>& c) {
  constexpr std::int64_t span = 1 << 20;
  return ((c[0] + span) * 2 * span + (c[1] + span)) * 2 * span + (c[2] + span);
}

void SpatialIndex::insert(std::uint32_t id, const geometry::Vec& p) {
  if (id != points_.size()) throw std::invalid_argument("spatial index ids must be dense");
  const auto c = cell_of(p);
  if (points_.empty()) {
    lo_ = hi_ = c;
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      lo_[i] = std::min(lo_[i], c[i]);
      hi_[i] = std::max(hi_[i], c[i]);
    }
  }
  points_.push_back(p);
  cells_[key(c)].push_back(id);
}

std::optional<std::uint32_t> SpatialIndex::nearest(const geometry::Vec& p) const {
  if (points_.empty()) return std::nullopt;
  const auto c = cell_of(p);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_id = 0;
  const std::int64_t zr = dim_ == 3 ? 1 : 0;
  std::int64_t max_ring = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    max_ring = std::max({max_ring, std::abs(c[i] - lo_[i]), std::abs(c[i] - hi_[i])});
  }
  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    // A point in ring k is at least (k - 1) * cell away, since p can sit anywhere in its cell.
    if (ring > 0 && best < static_cast<double>(ring - 1) * cell_) break;
    for (std::int64_t dx = -ring; dx <= ring; ++dx) {
      for (std::int64_t dy = -ring; dy <= ring; ++dy) {
        for (std::int64_t dz = -ring * zr; dz <= ring * zr; ++dz) {
          if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
          auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells_.end()) continue;
          for (std::uint32_t id : it->second) {
            const double d = geometry::dist(points_[id], p);
            if (d < best || (d == best && id < best_id)) {
              best = d;
              best_id = id;
            }
          }
        }
      }
    }
  }
  return best_id;
}

std::vector<std::uint32_t> SpatialIndex::within(const geometry::Vec& p, double r) const {
  std::vector<std::uint32_t> out;
  const auto c = cell_of(p);
  const std::int64_t reach = static_cast<std::int64_t>(std::ceil(r / cell_));
  const std::int64_t zr = dim_ == 3 ? reach : 0;
  for (std::int64_t dx = -reach; dx <= reach; ++dx) {
    for (std::int64_t dy = -reach; dy <= reach; ++dy) {
      for (std::int64_t dz = -zr; dz <= zr; ++dz) {
        auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
        if (it == cells_.end()) continue;
        for (std::uint32_t id : it->second) {
          if (geometry::dist(points_[id], p) <= r) out.push_back(id);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mvtl::planner
