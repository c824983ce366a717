#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include "mvtl/decomposition/decompose.hpp"

namespace mvtl::env {

using geometry::Vec;

inline constexpr double kInfiniteD = std::numeric_limits<double>::infinity();

/// r_plus * (1 - gamma^N) / gamma^n_bar: the smallest goal reward for which a
/// trajectory reaching the goal within n_bar steps out-earns any trajectory
/// that only collects the N intermediate rewards.
double reward_bound(double gamma, std::size_t N, std::size_t n_bar, double r_plus);

/// ceil(1.5 * length / (v_max * dt)), at least 1.
std::size_t default_n_bar(double segment_length, double v_max, double dt);

struct RewardSpec {
  double r_minus = -10.0;
  double r_plus = 1.0;
  double r_plusplus = 0.0;
  double gamma = 0.99;
  double radius = 1.0;
  std::size_t N = 0;      // waypoints of the task
  std::size_t n_bar = 1;  // steps allowed to reach the goal

  /// Validates r_minus < 0 < r_plus, gamma in (0,1) and the goal-reward bound.
  /// Without `r_plusplus` the goal reward is max(2 * bound, r_plus).
  static RewardSpec make(double r_minus, double r_plus, std::optional<double> r_plusplus,
                         double gamma, double radius, std::size_t N, std::size_t n_bar);
};

/// Smallest dist_to_go among waypoints whose closed ball contains x, else
/// kInfiniteD. Also reports the index attaining it.
double progression_D(const Vec& x, const decomposition::ReachAvoidTask& task,
                     std::size_t* index = nullptr);

enum class RewardCase { Collision, Goal, Progress, None };

/// Prioritised reward: collision first, then goal (D = 0), then strict progress
/// (D < d_min), else nothing.
RewardCase classify_reward(bool collision, double D, double d_min);
double reward_value(RewardCase c, const RewardSpec& spec);

}  // namespace mvtl::env
