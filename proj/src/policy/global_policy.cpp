#include "mvtl/policy/global_policy.hpp"

#include <stdexcept>

namespace mvtl::policy {

GlobalPolicy::GlobalPolicy(decomposition::TaskLasso tasks, std::vector<Policy> prefix,
                           std::vector<Policy> suffix)
    : tasks_(std::move(tasks)), prefix_(std::move(prefix)), suffix_(std::move(suffix)) {
  if (prefix_.size() != tasks_.prefix_tasks.size() || suffix_.size() != tasks_.suffix_tasks.size()) {
    throw std::invalid_argument("policy count does not match the task count");
  }
}

std::size_t GlobalPolicy::task_at(std::size_t k) const {
  if (k < prefix_.size()) return k;
  if (suffix_.empty()) throw std::out_of_range("execution ended after the prefix");
  return prefix_.size() + (k - prefix_.size()) % suffix_.size();
}

const Policy& GlobalPolicy::policy_at(std::size_t k) const {
  const std::size_t t = task_at(k);
  return t < prefix_.size() ? prefix_[t] : suffix_[t - prefix_.size()];
}

GlobalPolicy concatenate(const decomposition::TaskLasso& tasks, const std::vector<Policy>& policies) {
  if (policies.size() != tasks.size()) {
    throw std::invalid_argument("expected " + std::to_string(tasks.size()) + " policies, got " +
                                std::to_string(policies.size()));
  }
  const std::size_t np = tasks.prefix_tasks.size();
  return GlobalPolicy(tasks, std::vector<Policy>(policies.begin(), policies.begin() + static_cast<std::ptrdiff_t>(np)),
                      std::vector<Policy>(policies.begin() + static_cast<std::ptrdiff_t>(np), policies.end()));
}

GlobalEpisode run_global(const geometry::Workspace& ws, const GlobalPolicy& gp,
                         const env::EnvConfig& cfg, const env::DynState& s0,
                         std::size_t horizon_cycles, std::mt19937_64* noise_rng) {
  const auto all = gp.tasks().all();
  std::vector<env::TaskEnv> envs;
  envs.reserve(all.size());
  for (const auto* t : all) envs.push_back(env::make_task_env(ws, *t, cfg));

  const std::size_t np = gp.prefix_count();
  const std::size_t ns = gp.suffix_count();
  const std::size_t total_positions = np + ns * horizon_cycles;
  GlobalEpisode out;
  env::DynState s = s0;
  double g = 1.0;
  std::uint64_t cycle_acc = 0;

  for (std::size_t k = 0; k < total_positions; ++k) {
    const env::TaskEnv& e = envs[gp.task_at(k)];
    const Policy& pol = gp.policy_at(k);
    env::EpisodeState es = e.reset(s);
    if (es.done) {
      out.ret += g * e.spec().r_plusplus;
    }
    while (!es.done) {
      const env::StepResult r = e.step(es, pol.act(es, e.task(), e.dynamics()), noise_rng);
      out.ret += g * r.reward;
      g *= cfg.gamma;
      ++out.steps;
    }
    s = es.s;
    if (!es.reached_goal) {
      out.failed_position = k;
      // Episodes end early only on collision.
      out.collided = es.t < e.t_max();
      out.timed_out = !out.collided;
      return out;
    }
    out.switches.push_back(SwitchRecord{out.steps, k, es.d_min});
    ++out.tasks_completed;
    if (k < np) {
      out.prefix_violation += es.violation;
    } else {
      cycle_acc += es.violation;
      if ((k - np + 1) % ns == 0) {
        out.cycle_violations.push_back(cycle_acc);
        cycle_acc = 0;
      }
    }
  }
  out.success = true;
  return out;
}

GlobalMetrics evaluate(const GlobalPolicy& gp, const geometry::Workspace& ws,
                       const env::EnvConfig& cfg, std::size_t episodes,
                       std::size_t horizon_cycles, std::uint64_t seed,
                       std::uint64_t expected_cycle_violation) {
  GlobalMetrics m;
  m.episodes = episodes;
  const env::Dynamics dyn(cfg.dyn, ws.dimension());
  const StartDistribution start{{ws.x0()}, 0.0};
  auto rng = make_rng(seed, {5});
  std::size_t successes = 0, collisions = 0, timeouts = 0, handoffs = 0, handoff_failures = 0;
  double viol_sum = 0, prefix_sum = 0, ret_sum = 0;
  for (std::size_t e = 0; e < episodes; ++e) {
    const env::DynState s0 = sample_start(ws, start, dyn, rng);
    auto noise = make_rng(seed, {6, e});
    const GlobalEpisode ep = run_global(ws, gp, cfg, s0, horizon_cycles, &noise);
    ret_sum += ep.ret;
    // Each completed task passes control on, except the last one of a success.
    handoffs += ep.tasks_completed - (ep.success && ep.tasks_completed > 0 ? 1 : 0);
    if (ep.success) {
      ++successes;
      prefix_sum += static_cast<double>(ep.prefix_violation);
      double per_cycle = 0;
      for (std::uint64_t v : ep.cycle_violations) {
        per_cycle += static_cast<double>(v);
        if (v != expected_cycle_violation) m.cycle_violation_matches = false;
      }
      if (!ep.cycle_violations.empty()) per_cycle /= static_cast<double>(ep.cycle_violations.size());
      viol_sum += per_cycle;
    } else {
      if (ep.collided) ++collisions;
      if (ep.timed_out) ++timeouts;
      if (ep.failed_position > 0) ++handoff_failures;
    }
  }
  if (episodes > 0) {
    const double n = static_cast<double>(episodes);
    m.success_rate = static_cast<double>(successes) / n;
    m.collision_rate = static_cast<double>(collisions) / n;
    m.timeout_rate = static_cast<double>(timeouts) / n;
    m.mean_return = ret_sum / n;
  }
  if (successes > 0) {
    m.mean_violation_per_cycle = viol_sum / static_cast<double>(successes);
    m.mean_prefix_violation = prefix_sum / static_cast<double>(successes);
  }
  m.handoff_failure_rate =
      handoffs > 0 ? static_cast<double>(handoff_failures) / static_cast<double>(handoffs) : 0.0;
  return m;
}

}  // namespace mvtl::policy
