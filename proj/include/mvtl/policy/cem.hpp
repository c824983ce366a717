#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvtl/policy/policy.hpp"

namespace mvtl::policy {

struct CemBudget {
  std::size_t pop = 32;
  std::size_t elites = 6;
  std::size_t generations = 30;
  std::size_t episodes_per_candidate = 8;
  std::uint64_t seed = 0;
  double init_std = 2.0;
  double min_std = 0.05;
  std::size_t jobs = 1;  // worker threads for candidate evaluation
};

struct GenerationLog {
  std::size_t generation = 0;
  double mean = 0;             // mean score of the population
  double max = 0;
  double elite_threshold = 0;  // worst elite score
  double elite_mean = 0;
  double best_success = 0;     // goal-reaching fraction of the best candidate
};

struct TrainResult {
  Policy policy;
  std::vector<GenerationLog> log;
  bool reached_goal = false;   // best candidate reached the goal at least once
  std::string warning;         // set when no candidate ever reached the goal
};

/// Cross-entropy search over the policy parameters maximising the mean
/// discounted return from a fixed set of sampled starts. The previous elites
/// are carried into each generation, so with deterministic dynamics the elite
/// mean never decreases.
TrainResult train_subtask(const env::TaskEnv& env, const StartDistribution& starts,
                          const CemBudget& budget);

/// Goal-reaching statistics of one policy on one task.
struct SubtaskEval {
  std::size_t episodes = 0;
  std::size_t successes = 0;
  std::size_t collisions = 0;
  double mean_return = 0;
  double success_rate() const {
    return episodes ? static_cast<double>(successes) / static_cast<double>(episodes) : 0.0;
  }
};
SubtaskEval evaluate_subtask(const env::TaskEnv& env, const Policy& policy,
                             const StartDistribution& starts, std::size_t episodes,
                             std::uint64_t seed);

void write_training_log_csv(std::ostream& os, const std::vector<GenerationLog>& log);

/// Deterministic generator for a (seed, stream...) tuple.
std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

}  // namespace mvtl::policy
