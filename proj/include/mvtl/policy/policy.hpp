#pragma once

#include <random>
#include <vector>

#include <json.hpp>

#include "mvtl/env/episode.hpp"

namespace mvtl::policy {

using env::Action;
using env::DynamicsKind;

/// Linear policy over task-relative features, squashed into the action bounds.
///
/// Features are built from the vector to a lookahead waypoint just past the
/// closest visited one: its unit direction (body frame for Dubins), its
/// distance in ball radii, the heading error (Dubins) or the scaled velocity
/// (quad), plus a bias. Dubins: v = v_max * sigmoid(w0.f), omega =
/// omega_max * tanh(w1.f). Quad: a_i = a_max * tanh(w_i.f).
class Policy {
 public:
  Policy() = default;
  Policy(DynamicsKind kind, int dimension);

  static std::size_t feature_count(DynamicsKind kind, int dimension);
  static std::size_t output_count(DynamicsKind kind, int dimension);

  DynamicsKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  std::size_t parameter_count() const { return theta_.size(); }
  const std::vector<double>& theta() const { return theta_; }
  /// Throws std::invalid_argument on a size mismatch.
  void set_theta(std::vector<double> theta);

  std::vector<double> features(const env::EpisodeState& es, const decomposition::ReachAvoidTask& task,
                               const env::Dynamics& dyn) const;
  Action act(const env::EpisodeState& es, const decomposition::ReachAvoidTask& task,
             const env::Dynamics& dyn) const;

 private:
  DynamicsKind kind_ = DynamicsKind::Dubins;
  int dim_ = 2;
  std::vector<double> theta_;  // row-major outputs x features
};

nlohmann::json policy_to_json(const Policy& p);
Policy policy_from_json(const nlohmann::json& j);

/// Where episodes of a task start: uniformly in a ball around one of the
/// entry points (the goals of the tasks that hand over to it).
struct StartDistribution {
  std::vector<geometry::Vec> centers;
  double radius = 0;  // 0: start exactly at a center
};

/// Collision-free start position in the ball with a uniform heading and a
/// speed in [0, v_max / 2] (quad). Falls back to the center after repeated
/// rejections.
env::DynState sample_start(const geometry::Workspace& ws, const StartDistribution& dist,
                           const env::Dynamics& dyn, std::mt19937_64& rng);

/// Start distribution of every task in order (prefix tasks, then suffix tasks).
std::vector<StartDistribution> start_distributions(const geometry::Workspace& ws,
                                                   const decomposition::TaskLasso& tasks);

struct EpisodeOutcome {
  double ret = 0;        // discounted return including the absorbing tail
  bool reached_goal = false;
  bool collided = false;
  std::size_t steps = 0;
};

/// Runs one episode of `policy` on `env`; fills `trace` when given.
EpisodeOutcome run_episode(const env::TaskEnv& env, const Policy& policy, const env::DynState& s0,
                           std::mt19937_64* noise_rng, env::Trace* trace = nullptr);

}  // namespace mvtl::policy
