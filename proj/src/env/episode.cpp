#include "mvtl/env/episode.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mvtl::env {

std::string to_string(Event e) {
  switch (e) {
    case Event::None: return "none";
    case Event::Progress: return "progress";
    case Event::Goal: return "goal";
    case Event::Collision: return "collision";
    case Event::Timeout: return "timeout";
  }
  return "none";
}

double discounted_return(const Trace& trace) {
  double sum = 0;
  double g = 1;
  for (const TraceRow& r : trace.rows) {
    sum += g * r.reward;
    g *= trace.gamma;
  }
  // After the goal step the reward repeats at every later step.
  if (trace.absorbed) sum += g * trace.absorb_reward / (1 - trace.gamma);
  return sum;
}

double violation_total(const Trace& trace) {
  double sum = 0;
  for (std::uint64_t v : trace.violations) sum += static_cast<double>(v);
  return sum;
}

double discounted_violation(const Trace& trace, const std::vector<std::size_t>& completion_steps) {
  if (completion_steps.size() != trace.violations.size()) {
    throw std::invalid_argument("one completion step per violation entry expected");
  }
  double sum = 0;
  for (std::size_t i = 0; i < completion_steps.size(); ++i) {
    sum += std::pow(trace.gamma, static_cast<double>(completion_steps[i])) *
           static_cast<double>(trace.violations[i]);
  }
  return sum;
}

void write_trace_csv(std::ostream& os, const Trace& trace, std::size_t state_size,
                     std::size_t action_size) {
  os << "t";
  for (std::size_t i = 0; i < state_size; ++i) os << ",s" << i;
  for (std::size_t i = 0; i < action_size; ++i) os << ",a" << i;
  os << ",reward,D,d_min,event\n";
  for (const TraceRow& r : trace.rows) {
    os << r.t;
    for (std::size_t i = 0; i < state_size; ++i) os << ',' << r.s[i];
    for (std::size_t i = 0; i < action_size; ++i) os << ',' << r.a[i];
    os << ',' << r.reward << ',' << r.D << ',' << r.d_min << ',' << to_string(r.event) << '\n';
  }
}

TaskEnv::TaskEnv(const geometry::Workspace& ws, const decomposition::ReachAvoidTask& task,
                 RewardSpec spec, Dynamics dyn, bool absorb, std::size_t t_max)
    : ws_(ws), task_(task), spec_(spec), dyn_(dyn), absorb_(absorb), t_max_(t_max) {
  if (task_.waypoints.empty() || task_.dist_to_go.size() != task_.waypoints.size()) {
    throw std::invalid_argument("task needs waypoints with dist_to_go attached");
  }
  if (t_max_ == 0) throw std::invalid_argument("t_max must be positive");
}

EpisodeState TaskEnv::reset(const DynState& s0) const {
  EpisodeState es;
  es.s = s0;
  std::size_t idx = 0;
  es.d_min = progression_D(dyn_.position(s0), task_, &idx);
  es.has_closest = es.d_min != kInfiniteD;
  es.closest_index = idx;
  if (es.d_min == 0.0) {
    es.done = es.reached_goal = true;
    es.violation += task_.violation;
  }
  return es;
}

StepResult TaskEnv::step(EpisodeState& es, const Action& a, std::mt19937_64* noise_rng) const {
  if (es.done) throw std::logic_error("step called on a finished episode");
  const Vec before = dyn_.position(es.s);
  es.s = dyn_.step(es.s, a, noise_rng);
  ++es.t;
  const Vec x = dyn_.position(es.s);

  const bool collision = !ws_.in_bounds(x) || ws_.in_obstacle(x) ||
                         !ws_.segment_collision_free(before, x);
  StepResult r;
  std::size_t idx = 0;
  r.D = collision ? kInfiniteD : progression_D(x, task_, &idx);
  const RewardCase c = classify_reward(collision, r.D, es.d_min);
  r.reward = reward_value(c, spec_);
  switch (c) {
    case RewardCase::Collision:
      r.event = Event::Collision;
      es.done = true;
      break;
    case RewardCase::Goal:
      r.event = Event::Goal;
      es.d_min = 0.0;
      es.closest_index = idx;
      es.has_closest = true;
      es.done = es.reached_goal = true;
      es.violation += task_.violation;
      break;
    case RewardCase::Progress:
      r.event = Event::Progress;
      es.d_min = r.D;
      es.closest_index = idx;
      es.has_closest = true;
      break;
    case RewardCase::None:
      break;
  }
  if (!es.done && es.t >= t_max_) {
    r.event = Event::Timeout;
    es.done = true;
  }
  r.done = es.done;
  return r;
}

}  // namespace mvtl::env

namespace mvtl::env {

std::size_t task_n_bar(const decomposition::ReachAvoidTask& task, const DynamicsParams& dyn) {
  return default_n_bar(task.length() + task.radius, dyn.v_max, dyn.dt);
}

TaskEnv make_task_env(const geometry::Workspace& ws, const decomposition::ReachAvoidTask& task,
                      const EnvConfig& cfg) {
  const std::size_t n_bar = task_n_bar(task, cfg.dyn);
  RewardSpec spec = RewardSpec::make(cfg.r_minus, cfg.r_plus, cfg.r_plusplus, cfg.gamma,
                                     task.radius, task.waypoints.size(), n_bar);
  return TaskEnv(ws, task, spec, Dynamics(cfg.dyn, ws.dimension()), cfg.absorb,
                 cfg.t_max ? *cfg.t_max : 4 * n_bar);
}

}  // namespace mvtl::env
