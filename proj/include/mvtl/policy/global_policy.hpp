#pragma once

#include <cstdint>
#include <vector>

#include "mvtl/policy/cem.hpp"

namespace mvtl::policy {

/// Switched controller executing the prefix policies once and then the
/// suffix policies cyclically; control passes on when the active task's
/// progression value reaches 0.
class GlobalPolicy {
 public:
  GlobalPolicy(decomposition::TaskLasso tasks, std::vector<Policy> prefix,
               std::vector<Policy> suffix);

  const decomposition::TaskLasso& tasks() const { return tasks_; }
  std::size_t prefix_count() const { return prefix_.size(); }
  std::size_t suffix_count() const { return suffix_.size(); }
  /// Task order index (into tasks().all()) executed at position k; suffix
  /// positions wrap around. Throws std::out_of_range past the end of a
  /// finite (suffix-free) execution.
  std::size_t task_at(std::size_t k) const;
  const Policy& policy_at(std::size_t k) const;

 private:
  decomposition::TaskLasso tasks_;
  std::vector<Policy> prefix_;
  std::vector<Policy> suffix_;
};

/// Pairs the policies with the tasks; throws std::invalid_argument on a count
/// mismatch.
GlobalPolicy concatenate(const decomposition::TaskLasso& tasks, const std::vector<Policy>& policies);

struct SwitchRecord {
  std::size_t step = 0;       // global step at which control passed on
  std::size_t position = 0;   // execution position that finished
  double D = 0;               // progression value of the finished task
};

struct GlobalEpisode {
  bool success = false;       // prefix and all requested cycles completed
  bool collided = false;
  bool timed_out = false;
  std::size_t steps = 0;
  std::size_t tasks_completed = 0;
  std::size_t failed_position = 0;  // meaningful when !success
  std::uint64_t prefix_violation = 0;
  std::vector<std::uint64_t> cycle_violations;  // one per completed cycle
  double ret = 0;             // discounted over global time
  std::vector<SwitchRecord> switches;
};

/// Runs the switched controller from s0 until `horizon_cycles` suffix cycles
/// are completed (or the prefix ends when there is no suffix), a task fails,
/// or a task times out.
GlobalEpisode run_global(const geometry::Workspace& ws, const GlobalPolicy& gp,
                         const env::EnvConfig& cfg, const env::DynState& s0,
                         std::size_t horizon_cycles, std::mt19937_64* noise_rng);

struct GlobalMetrics {
  std::size_t episodes = 0;
  double success_rate = 0;
  double mean_violation_per_cycle = 0;  // over successful episodes
  double mean_prefix_violation = 0;     // over successful episodes
  double mean_return = 0;
  double collision_rate = 0;
  double timeout_rate = 0;
  double handoff_failure_rate = 0;      // failures right after a switch / switches attempted
  /// Every successful episode realised exactly `expected` violation per cycle.
  bool cycle_violation_matches = true;
};

GlobalMetrics evaluate(const GlobalPolicy& gp, const geometry::Workspace& ws,
                       const env::EnvConfig& cfg, std::size_t episodes,
                       std::size_t horizon_cycles, std::uint64_t seed,
                       std::uint64_t expected_cycle_violation);

}  // namespace mvtl::policy
