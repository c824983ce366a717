#pragma once

#include <array>
#include <random>
#include <string>

#include "mvtl/geometry/vec.hpp"

namespace mvtl::env {

using geometry::Vec;

enum class DynamicsKind { Dubins, KinematicQuad };

struct DynamicsParams {
  DynamicsKind kind = DynamicsKind::Dubins;
  double dt = 0.05;         // seconds
  double v_max = 1.0;       // speed bound
  double omega_max = 2.0;   // Dubins turn-rate bound (rad/s)
  double a_max = 2.0;       // quad acceleration bound per axis
  double noise_std = 0.0;   // Gaussian perturbation added to the action
};

/// Dubins: (x, y, theta, -, -, -). Quad: (px, py, pz, vx, vy, vz).
using DynState = std::array<double, 6>;
/// Dubins: (v, omega, -). Quad: (ax, ay, az).
using Action = std::array<double, 3>;

DynamicsKind dynamics_kind_from_string(const std::string& s);
std::string to_string(DynamicsKind k);

class Dynamics {
 public:
  /// Throws std::invalid_argument on non-positive dt or bounds.
  explicit Dynamics(DynamicsParams p, int dimension = 2);

  const DynamicsParams& params() const { return p_; }
  int dimension() const { return dim_; }
  std::size_t state_size() const { return p_.kind == DynamicsKind::Dubins ? 3 : 6; }
  std::size_t action_size() const;

  Action clamp(Action a) const;
  /// Derivative of the state under a (clamped) action.
  DynState derivative(const DynState& s, const Action& a) const;
  /// One fourth-order Runge-Kutta step of length dt with the action held
  /// constant; the action is clamped first and perturbed when noise is on.
  DynState step(const DynState& s, Action a, std::mt19937_64* rng = nullptr) const;
  /// Workspace position of a state.
  Vec position(const DynState& s) const;
  /// State at `pos` with the given heading (Dubins) or velocity (quad).
  DynState make_state(const Vec& pos, double heading, const Vec& velocity) const;

 private:
  DynamicsParams p_;
  int dim_;
};

/// Exact Dubins motion after time t under constant (v, omega).
DynState dubins_exact(const DynState& s, double v, double omega, double t);

}  // namespace mvtl::env
