#include "mvtl/geometry/shape.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvtl::geometry {

namespace {

std::size_t axes(int dim) { return static_cast<std::size_t>(dim); }

void check_dimension(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
}

Vec flatten(Vec v, int dim) {
  if (dim == 2) v.z = 0;
  return v;
}

}  // namespace

Shape::Shape(Box b, int dimension) : dim_(dimension) {
  check_dimension(dim_);
  b.min = flatten(b.min, dim_);
  b.max = flatten(b.max, dim_);
  for (std::size_t i = 0; i < axes(dim_); ++i) {
    if (!(b.min[i] < b.max[i])) throw std::invalid_argument("box needs min < max on every axis");
  }
  shape_ = b;
}

Shape::Shape(Ball b, int dimension) : dim_(dimension) {
  check_dimension(dim_);
  if (!(b.radius > 0)) throw std::invalid_argument("ball radius must be positive");
  b.center = flatten(b.center, dim_);
  shape_ = b;
}

bool Shape::contains(const Vec& p) const {
  if (const Box* b = std::get_if<Box>(&shape_)) {
    for (std::size_t i = 0; i < axes(dim_); ++i) {
      if (p[i] < b->min[i] || p[i] > b->max[i]) return false;
    }
    return true;
  }
  const Ball& c = std::get<Ball>(shape_);
  const Vec d = flatten(p, dim_) - c.center;
  return dot(d, d) <= c.radius * c.radius;
}

bool Shape::intersects_segment(const Vec& a0, const Vec& b0) const {
  const Vec a = flatten(a0, dim_);
  const Vec b = flatten(b0, dim_);
  const Vec d = b - a;
  if (const Box* box = std::get_if<Box>(&shape_)) {
    // Slab clipping of the parameter interval [0,1].
    double lo = 0.0;
    double hi = 1.0;
    for (std::size_t i = 0; i < axes(dim_); ++i) {
      if (d[i] == 0.0) {
        if (a[i] < box->min[i] || a[i] > box->max[i]) return false;
        continue;
      }
      double t1 = (box->min[i] - a[i]) / d[i];
      double t2 = (box->max[i] - a[i]) / d[i];
      if (t1 > t2) std::swap(t1, t2);
      lo = std::max(lo, t1);
      hi = std::min(hi, t2);
      if (lo > hi) return false;
    }
    return true;
  }
  const Ball& c = std::get<Ball>(shape_);
  const double len2 = dot(d, d);
  double t = len2 > 0 ? dot(c.center - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec off = a + d * t - c.center;
  return dot(off, off) <= c.radius * c.radius;
}

double Shape::distance(const Vec& p0) const {
  const Vec p = flatten(p0, dim_);
  if (const Box* b = std::get_if<Box>(&shape_)) {
    Vec out;
    for (std::size_t i = 0; i < axes(dim_); ++i) {
      out[i] = std::max({b->min[i] - p[i], 0.0, p[i] - b->max[i]});
    }
    return norm(out);
  }
  const Ball& c = std::get<Ball>(shape_);
  return std::max(0.0, dist(p, c.center) - c.radius);
}

Box Shape::bounding_box() const {
  if (const Box* b = std::get_if<Box>(&shape_)) return *b;
  const Ball& c = std::get<Ball>(shape_);
  Vec r{c.radius, c.radius, dim_ == 3 ? c.radius : 0.0};
  return Box{c.center - r, c.center + r};
}

Vec Shape::sample(std::mt19937_64& rng) const {
  const Box bb = bounding_box();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    Vec p;
    for (std::size_t i = 0; i < axes(dim_); ++i) p[i] = bb.min[i] + u(rng) * (bb.max[i] - bb.min[i]);
    if (contains(p)) return p;
  }
}

}  // namespace mvtl::geometry
