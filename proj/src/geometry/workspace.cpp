#include "mvtl/geometry/workspace.hpp"

#include <algorithm>

namespace mvtl::geometry {

Workspace::Workspace(int dimension, Box bounds, ltl::Alphabet ap, std::vector<Region> regions,
                     std::vector<Shape> obstacles, Vec x0,
                     std::optional<std::size_t> obstacle_atom)
    : dim_(dimension),
      bounds_(Shape(bounds, dimension).as_box()),
      ap_(std::move(ap)),
      regions_(std::move(regions)),
      obstacles_(std::move(obstacles)),
      x0_(x0),
      obstacle_atom_(obstacle_atom) {
  if (dim_ == 2) x0_.z = 0;
  if (!in_bounds(x0_)) throw ScenarioError("initial point lies outside the bounds");
  const Shape bshape(bounds_, dim_);
  auto inside = [&](const Shape& s) {
    const Box bb = s.bounding_box();
    return bshape.contains(bb.min) && bshape.contains(bb.max);
  };
  for (const Region& r : regions_) {
    if (r.atom >= ap_.size()) throw ScenarioError("region label outside the alphabet");
    if (r.shape.dimension() != dim_) throw ScenarioError("region dimension mismatch");
    if (!inside(r.shape)) {
      throw ScenarioError("region '" + ap_.name(r.atom) + "' extends outside the bounds");
    }
  }
  for (const Shape& o : obstacles_) {
    if (o.dimension() != dim_) throw ScenarioError("obstacle dimension mismatch");
  }
  if (obstacle_atom_ && *obstacle_atom_ >= ap_.size()) {
    throw ScenarioError("obstacle label outside the alphabet");
  }
}

double Workspace::diameter() const { return dist(bounds_.min, bounds_.max); }

bool Workspace::in_bounds(const Vec& x) const {
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
    if (x[i] < bounds_.min[i] || x[i] > bounds_.max[i]) return false;
  }
  return true;
}

bool Workspace::in_obstacle(const Vec& x) const {
  return std::any_of(obstacles_.begin(), obstacles_.end(),
                     [&](const Shape& o) { return o.contains(x); });
}

ltl::Symbol Workspace::label_of(const Vec& x) const {
  if (!in_bounds(x)) throw std::out_of_range("label_of: point outside the workspace bounds");
  std::uint32_t bits = 0;
  for (const Region& r : regions_) {
    if (r.shape.contains(x)) bits |= 1u << r.atom;
  }
  if (obstacle_atom_ && in_obstacle(x)) bits |= 1u << *obstacle_atom_;
  return ltl::Symbol(bits);
}

bool Workspace::segment_collision_free(const Vec& a, const Vec& b) const {
  return std::none_of(obstacles_.begin(), obstacles_.end(),
                      [&](const Shape& o) { return o.intersects_segment(a, b); });
}

bool Workspace::gwts_transition(const Vec& a, const Vec& b, double eta) const {
  return dist(a, b) <= eta && segment_collision_free(a, b);
}

Vec Workspace::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec p;
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
    p[i] = bounds_.min[i] + u(rng) * (bounds_.max[i] - bounds_.min[i]);
  }
  return p;
}

Workspace Workspace::with_obstacles(std::vector<Shape> obstacles) const {
  return Workspace(dim_, bounds_, ap_, regions_, std::move(obstacles), x0_, obstacle_atom_);
}

// ---------------------------------------------------------------------------
// JSON

Vec vec_from_json(const nlohmann::json& j, int dimension) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dimension)) {
    throw ScenarioError("expected an array of " + std::to_string(dimension) + " numbers, got " +
                        j.dump());
  }
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ScenarioError("non-numeric coordinate in " + j.dump());
    v[i] = j[i].get<double>();
  }
  return v;
}

nlohmann::json vec_to_json(const Vec& v, int dimension) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < static_cast<std::size_t>(dimension); ++i) j.push_back(v[i]);
  return j;
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ScenarioError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

Shape shape_from_json(const nlohmann::json& j, int dim, const std::string& where) {
  const auto& type = field(j, "type", where);
  try {
    if (type == "box") {
      return Shape::box(vec_from_json(field(j, "min", where), dim),
                        vec_from_json(field(j, "max", where), dim), dim);
    }
    if (type == "ball") {
      const auto& r = field(j, "radius", where);
      if (!r.is_number()) throw ScenarioError(where + ": radius must be a number");
      return Shape::ball(vec_from_json(field(j, "center", where), dim), r.get<double>(), dim);
    }
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(where + ": " + e.what());
  }
  throw ScenarioError(where + ": unknown shape type " + type.dump());
}

nlohmann::json shape_to_json(const Shape& s) {
  const int d = s.dimension();
  if (s.is_box()) {
    return {{"type", "box"},
            {"min", vec_to_json(s.as_box().min, d)},
            {"max", vec_to_json(s.as_box().max, d)}};
  }
  return {{"type", "ball"},
          {"center", vec_to_json(s.as_ball().center, d)},
          {"radius", s.as_ball().radius}};
}

}  // namespace

Workspace workspace_from_json(const nlohmann::json& j) {
  const std::string top = "scenario";
  const auto& dj = field(j, "dimension", top);
  if (!dj.is_number_integer() || (dj.get<int>() != 2 && dj.get<int>() != 3)) {
    throw ScenarioError("scenario: dimension must be 2 or 3");
  }
  const int dim = dj.get<int>();

  const auto& apj = field(j, "ap", top);
  if (!apj.is_array()) throw ScenarioError("scenario: 'ap' must be an array of names");
  std::vector<std::string> names;
  for (const auto& n : apj) {
    if (!n.is_string()) throw ScenarioError("scenario: 'ap' entries must be strings");
    names.push_back(n.get<std::string>());
  }
  ltl::Alphabet ap = [&] {
    try {
      return ltl::Alphabet(names);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string("scenario: ap: ") + e.what());
    }
  }();

  const auto& bj = field(j, "bounds", top);
  Box bounds{vec_from_json(field(bj, "min", "bounds"), dim),
             vec_from_json(field(bj, "max", "bounds"), dim)};
  try {
    bounds = Shape(bounds, dim).as_box();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("bounds: ") + e.what());
  }

  std::vector<Region> regions;
  if (j.contains("regions")) {
    std::size_t i = 0;
    for (const auto& rj : j.at("regions")) {
      const std::string where = "regions[" + std::to_string(i++) + "]";
      const auto& lj = field(rj, "label", where);
      if (!lj.is_string()) throw ScenarioError(where + ": label must be a string");
      auto idx = ap.index_of(lj.get<std::string>());
      if (!idx) throw ScenarioError(where + ": label '" + lj.get<std::string>() + "' not in ap");
      regions.push_back(Region{*idx, shape_from_json(field(rj, "shape", where), dim, where)});
    }
  }

  std::vector<Shape> obstacles;
  if (j.contains("obstacles")) {
    std::size_t i = 0;
    for (const auto& oj : j.at("obstacles")) {
      const std::string where = "obstacles[" + std::to_string(i++) + "]";
      obstacles.push_back(shape_from_json(oj.contains("shape") ? oj.at("shape") : oj, dim, where));
    }
  }

  std::optional<std::size_t> obstacle_atom;
  const std::string olabel = j.value("obstacle_label", std::string("O"));
  if (auto idx = ap.index_of(olabel)) obstacle_atom = *idx;
  else if (j.contains("obstacle_label")) {
    throw ScenarioError("scenario: obstacle_label '" + olabel + "' not in ap");
  }

  return Workspace(dim, bounds, std::move(ap), std::move(regions), std::move(obstacles),
                   vec_from_json(field(j, "init", top), dim), obstacle_atom);
}

nlohmann::json workspace_to_json(const Workspace& ws) {
  const int d = ws.dimension();
  nlohmann::json j;
  j["dimension"] = d;
  j["ap"] = ws.alphabet().names();
  j["bounds"] = {{"min", vec_to_json(ws.bounds().min, d)}, {"max", vec_to_json(ws.bounds().max, d)}};
  j["init"] = vec_to_json(ws.x0(), d);
  j["regions"] = nlohmann::json::array();
  for (const Region& r : ws.regions()) {
    j["regions"].push_back({{"label", ws.alphabet().name(r.atom)}, {"shape", shape_to_json(r.shape)}});
  }
  j["obstacles"] = nlohmann::json::array();
  for (const Shape& o : ws.obstacles()) j["obstacles"].push_back(shape_to_json(o));
  if (ws.obstacle_atom()) j["obstacle_label"] = ws.alphabet().name(*ws.obstacle_atom());
  return j;
}

}  // namespace mvtl::geometry
