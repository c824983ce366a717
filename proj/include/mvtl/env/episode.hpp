#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mvtl/env/dynamics.hpp"
#include "mvtl/env/reward.hpp"
#include "mvtl/geometry/workspace.hpp"

namespace mvtl::env {

enum class Event { None, Progress, Goal, Collision, Timeout };
std::string to_string(Event e);

struct EpisodeState {
  DynState s{};
  std::size_t t = 0;
  double d_min = kInfiniteD;        // running minimum of D
  std::size_t closest_index = 0;    // waypoint attaining d_min
  bool has_closest = false;
  std::uint64_t violation = 0;      // charged at goal completion
  bool done = false;
  bool reached_goal = false;
};

struct StepResult {
  double reward = 0;
  Event event = Event::None;
  double D = kInfiniteD;
  bool done = false;
};

struct TraceRow {
  std::size_t t = 0;
  DynState s{};
  Action a{};
  double reward = 0;
  double D = kInfiniteD;
  double d_min = kInfiniteD;
  Event event = Event::None;
};

struct Trace {
  std::vector<TraceRow> rows;
  double gamma = 0.99;
  /// Episode ended at the goal in absorbing mode: the goal reward repeats forever.
  bool absorbed = false;
  double absorb_reward = 0;
  std::vector<std::uint64_t> violations;  // one entry per completed task
};

/// Discounted sum of the rewards, including the absorbing tail when present.
double discounted_return(const Trace& trace);
/// Undiscounted sum of the task-completion violations.
double violation_total(const Trace& trace);
/// Same sum discounted by the step at which each completion happened.
double discounted_violation(const Trace& trace, const std::vector<std::size_t>& completion_steps);

void write_trace_csv(std::ostream& os, const Trace& trace, std::size_t state_size,
                     std::size_t action_size);

/// One reach-avoid task as an episodic environment.
class TaskEnv {
 public:
  TaskEnv(const geometry::Workspace& ws, const decomposition::ReachAvoidTask& task,
          RewardSpec spec, Dynamics dyn, bool absorb, std::size_t t_max);

  const geometry::Workspace& workspace() const { return ws_; }
  const RewardSpec& spec() const { return spec_; }
  const Dynamics& dynamics() const { return dyn_; }
  const decomposition::ReachAvoidTask& task() const { return task_; }
  std::size_t t_max() const { return t_max_; }
  bool absorb() const { return absorb_; }

  /// Starts an episode; it is already finished when s0 is inside the goal ball.
  EpisodeState reset(const DynState& s0) const;
  /// Advances one step. Collisions cover obstacles, the swept segment and
  /// leaving the bounds.
  StepResult step(EpisodeState& es, const Action& a, std::mt19937_64* noise_rng = nullptr) const;

 private:
  const geometry::Workspace& ws_;
  const decomposition::ReachAvoidTask& task_;
  RewardSpec spec_;
  Dynamics dyn_;
  bool absorb_;
  std::size_t t_max_;
};

}  // namespace mvtl::env

namespace mvtl::env {

/// Reward and dynamics settings shared by all tasks of a run.
struct EnvConfig {
  DynamicsParams dyn;
  double gamma = 0.99;
  double r_minus = -10.0;
  double r_plus = 1.0;
  std::optional<double> r_plusplus;  // nullopt: automatic from the bound
  bool absorb = true;
  std::optional<std::size_t> t_max;  // nullopt: 4 * n_bar
};

/// n_bar for a task: entry offset (one ball radius) plus the waypoint path.
std::size_t task_n_bar(const decomposition::ReachAvoidTask& task, const DynamicsParams& dyn);

/// Environment for one task with the reward spec derived from the config.
TaskEnv make_task_env(const geometry::Workspace& ws, const decomposition::ReachAvoidTask& task,
                      const EnvConfig& cfg);

}  // namespace mvtl::env
