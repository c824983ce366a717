#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace mvtl::geometry {

/// Point or vector in R^3; 2D workspaces keep z = 0.
struct Vec {
  double x = 0, y = 0, z = 0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec& operator+=(const Vec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec&) const = default;
};

constexpr Vec operator*(double s, const Vec& v) { return v * s; }
constexpr double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

}  // namespace mvtl::geometry
