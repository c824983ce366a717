#include "mvtl/env/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvtl::env {

DynamicsKind dynamics_kind_from_string(const std::string& s) {
  if (s == "dubins") return DynamicsKind::Dubins;
  if (s == "quad" || s == "kinematic_quad") return DynamicsKind::KinematicQuad;
  throw std::invalid_argument("unknown dynamics '" + s + "' (expected dubins or quad)");
}

std::string to_string(DynamicsKind k) { return k == DynamicsKind::Dubins ? "dubins" : "quad"; }

Dynamics::Dynamics(DynamicsParams p, int dimension) : p_(p), dim_(dimension) {
  if (!(p_.dt > 0)) throw std::invalid_argument("dt must be positive");
  if (!(p_.v_max > 0) || !(p_.omega_max > 0) || !(p_.a_max > 0)) {
    throw std::invalid_argument("dynamic bounds must be positive");
  }
  if (p_.noise_std < 0) throw std::invalid_argument("noise_std must be nonnegative");
  if (p_.kind == DynamicsKind::Dubins && dimension != 2) {
    throw std::invalid_argument("Dubins dynamics need a 2D workspace");
  }
}

std::size_t Dynamics::action_size() const {
  if (p_.kind == DynamicsKind::Dubins) return 2;
  return static_cast<std::size_t>(dim_);
}

Action Dynamics::clamp(Action a) const {
  if (p_.kind == DynamicsKind::Dubins) {
    a[0] = std::clamp(a[0], 0.0, p_.v_max);
    a[1] = std::clamp(a[1], -p_.omega_max, p_.omega_max);
    a[2] = 0;
  } else {
    for (std::size_t i = 0; i < 3; ++i) a[i] = std::clamp(a[i], -p_.a_max, p_.a_max);
    if (dim_ == 2) a[2] = 0;
  }
  return a;
}

DynState Dynamics::derivative(const DynState& s, const Action& a) const {
  DynState d{};
  if (p_.kind == DynamicsKind::Dubins) {
    d[0] = a[0] * std::cos(s[2]);
    d[1] = a[0] * std::sin(s[2]);
    d[2] = a[1];
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      d[i] = s[3 + i];
      d[3 + i] = a[i];
    }
  }
  return d;
}

DynState Dynamics::step(const DynState& s, Action a, std::mt19937_64* rng) const {
  if (rng && p_.noise_std > 0) {
    std::normal_distribution<double> n(0.0, p_.noise_std);
    for (std::size_t i = 0; i < action_size(); ++i) a[i] += n(*rng);
  }
  a = clamp(a);
  const double h = p_.dt;
  auto axpy = [](const DynState& x, const DynState& k, double c) {
    DynState r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] + c * k[i];
    return r;
  };
  const DynState k1 = derivative(s, a);
  const DynState k2 = derivative(axpy(s, k1, h / 2), a);
  const DynState k3 = derivative(axpy(s, k2, h / 2), a);
  const DynState k4 = derivative(axpy(s, k3, h), a);
  DynState out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = s[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  if (p_.kind == DynamicsKind::KinematicQuad) {
    // Speed limit on the velocity part.
    const double speed = std::sqrt(out[3] * out[3] + out[4] * out[4] + out[5] * out[5]);
    if (speed > p_.v_max) {
      for (std::size_t i = 3; i < 6; ++i) out[i] *= p_.v_max / speed;
    }
    if (dim_ == 2) out[2] = out[5] = 0;
  }
  return out;
}

Vec Dynamics::position(const DynState& s) const {
  if (p_.kind == DynamicsKind::Dubins) return Vec{s[0], s[1], 0};
  return Vec{s[0], s[1], dim_ == 3 ? s[2] : 0.0};
}

DynState Dynamics::make_state(const Vec& pos, double heading, const Vec& velocity) const {
  if (p_.kind == DynamicsKind::Dubins) return DynState{pos.x, pos.y, heading, 0, 0, 0};
  return DynState{pos.x, pos.y, dim_ == 3 ? pos.z : 0.0,
                  velocity.x, velocity.y, dim_ == 3 ? velocity.z : 0.0};
}

DynState dubins_exact(const DynState& s, double v, double omega, double t) {
  DynState out = s;
  if (std::abs(omega) < 1e-12) {
    out[0] = s[0] + v * t * std::cos(s[2]);
    out[1] = s[1] + v * t * std::sin(s[2]);
    return out;
  }
  const double th = s[2] + omega * t;
  out[0] = s[0] + v / omega * (std::sin(th) - std::sin(s[2]));
  out[1] = s[1] - v / omega * (std::cos(th) - std::cos(s[2]));
  out[2] = th;
  return out;
}

}  // namespace mvtl::env
