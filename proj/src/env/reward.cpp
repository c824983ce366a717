#include "mvtl/env/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mvtl::env {

double reward_bound(double gamma, std::size_t N, std::size_t n_bar, double r_plus) {
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in (0,1)");
  const double gn = std::pow(gamma, static_cast<double>(n_bar));
  // 1 - gamma^N via expm1 keeps precision when gamma^N is close to 1.
  const double one_minus = -std::expm1(static_cast<double>(N) * std::log(gamma));
  return r_plus * one_minus / gn;
}

std::size_t default_n_bar(double segment_length, double v_max, double dt) {
  const double steps = std::ceil(1.5 * segment_length / (v_max * dt));
  return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

RewardSpec RewardSpec::make(double r_minus, double r_plus, std::optional<double> r_plusplus,
                            double gamma, double radius, std::size_t N, std::size_t n_bar) {
  if (!(r_minus < 0)) throw std::invalid_argument("r_minus must be negative");
  if (!(r_plus > 0)) throw std::invalid_argument("r_plus must be positive");
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in (0,1)");
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  const double bound = reward_bound(gamma, N, n_bar, r_plus);
  RewardSpec s;
  s.r_minus = r_minus;
  s.r_plus = r_plus;
  s.gamma = gamma;
  s.radius = radius;
  s.N = N;
  s.n_bar = n_bar;
  s.r_plusplus = r_plusplus ? *r_plusplus : std::max(2.0 * bound, r_plus);
  if (!(s.r_plusplus > 0) || s.r_plusplus < bound) {
    throw std::invalid_argument("r_plusplus = " + std::to_string(s.r_plusplus) +
                                " is below the goal-reward bound " + std::to_string(bound) +
                                " for N = " + std::to_string(N) +
                                ", n_bar = " + std::to_string(n_bar));
  }
  return s;
}

double progression_D(const Vec& x, const decomposition::ReachAvoidTask& task, std::size_t* index) {
  double best = kInfiniteD;
  std::size_t best_i = 0;
  const double r2 = task.radius * task.radius;
  for (std::size_t i = 0; i < task.waypoints.size(); ++i) {
    const Vec d = x - task.waypoints[i];
    if (geometry::dot(d, d) <= r2 && task.dist_to_go[i] < best) {
      best = task.dist_to_go[i];
      best_i = i;
    }
  }
  if (index) *index = best_i;
  return best;
}

RewardCase classify_reward(bool collision, double D, double d_min) {
  if (collision) return RewardCase::Collision;
  if (D == 0.0) return RewardCase::Goal;
  if (D < d_min) return RewardCase::Progress;
  return RewardCase::None;
}

double reward_value(RewardCase c, const RewardSpec& spec) {
  switch (c) {
    case RewardCase::Collision: return spec.r_minus;
    case RewardCase::Goal: return spec.r_plusplus;
    case RewardCase::Progress: return spec.r_plus;
    case RewardCase::None: return 0.0;
  }
  return 0.0;
}

}  // namespace mvtl::env
