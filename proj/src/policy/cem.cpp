#include "mvtl/policy/cem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mvtl::policy {

std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (std::uint64_t s : stream) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

namespace {

struct Score {
  double ret = 0;
  double success = 0;
};

template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += jobs) f(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace

TrainResult train_subtask(const env::TaskEnv& env, const StartDistribution& starts,
                          const CemBudget& b) {
  if (b.pop == 0 || b.elites == 0 || b.elites > b.pop || b.generations == 0 ||
      b.episodes_per_candidate == 0 || !(b.init_std > 0) || b.min_std < 0) {
    throw std::invalid_argument("invalid CEM budget");
  }
  const env::Dynamics& dyn = env.dynamics();
  Policy proto(dyn.params().kind, dyn.dimension());
  const std::size_t np = proto.parameter_count();

  // Common random numbers: one start set (and noise stream per start) for the run.
  std::vector<env::DynState> start_states;
  {
    auto rng = make_rng(b.seed, {0});
    for (std::size_t e = 0; e < b.episodes_per_candidate; ++e) {
      start_states.push_back(sample_start(env.workspace(), starts, dyn, rng));
    }
  }
  auto evaluate = [&](const std::vector<double>& theta) {
    Policy p = proto;
    p.set_theta(theta);
    Score s;
    for (std::size_t e = 0; e < start_states.size(); ++e) {
      auto noise = make_rng(b.seed, {1, e});
      const EpisodeOutcome o = run_episode(env, p, start_states[e], &noise);
      s.ret += o.ret;
      s.success += o.reached_goal ? 1.0 : 0.0;
    }
    s.ret /= static_cast<double>(start_states.size());
    s.success /= static_cast<double>(start_states.size());
    return s;
  };

  std::vector<double> mean(np, 0.0);
  std::vector<double> stddev(np, b.init_std);
  std::vector<std::vector<double>> elites;
  std::vector<Score> elite_scores;
  TrainResult result;
  bool ever_reached = false;

  for (std::size_t g = 0; g < b.generations; ++g) {
    auto rng = make_rng(b.seed, {2, g});
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<std::vector<double>> cand;
    std::vector<Score> scores;
    // Carried-over elites keep their (deterministic) scores.
    for (std::size_t i = 0; i < elites.size(); ++i) {
      cand.push_back(elites[i]);
      scores.push_back(elite_scores[i]);
    }
    const std::size_t carried = cand.size();
    while (cand.size() < b.pop + carried) {
      std::vector<double> th(np);
      for (std::size_t k = 0; k < np; ++k) th[k] = mean[k] + stddev[k] * n01(rng);
      cand.push_back(std::move(th));
    }
    scores.resize(cand.size());
    parallel_for(cand.size() - carried, b.jobs,
                 [&](std::size_t i) { scores[carried + i] = evaluate(cand[carried + i]); });

    std::vector<std::size_t> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return scores[a].ret > scores[c].ret; });

    GenerationLog gl;
    gl.generation = g;
    double sum = 0;
    for (std::size_t i = carried; i < cand.size(); ++i) sum += scores[i].ret;
    gl.mean = sum / static_cast<double>(cand.size() - carried);
    gl.max = scores[order.front()].ret;
    gl.best_success = scores[order.front()].success;

    elites.clear();
    elite_scores.clear();
    double elite_sum = 0;
    for (std::size_t i = 0; i < b.elites; ++i) {
      elites.push_back(cand[order[i]]);
      elite_scores.push_back(scores[order[i]]);
      elite_sum += scores[order[i]].ret;
      if (scores[order[i]].success > 0) ever_reached = true;
    }
    gl.elite_mean = elite_sum / static_cast<double>(b.elites);
    gl.elite_threshold = elite_scores.back().ret;
    result.log.push_back(gl);

    for (std::size_t k = 0; k < np; ++k) {
      double m = 0;
      for (const auto& e : elites) m += e[k];
      m /= static_cast<double>(elites.size());
      double v = 0;
      for (const auto& e : elites) v += (e[k] - m) * (e[k] - m);
      v /= static_cast<double>(elites.size());
      mean[k] = m;
      stddev[k] = std::max(std::sqrt(v), b.min_std);
    }
  }

  result.policy = proto;
  result.policy.set_theta(elites.front());
  result.reached_goal = elite_scores.front().success > 0;
  if (!ever_reached) {
    result.warning = "training budget exhausted without reaching the goal; returning best-so-far";
  }
  return result;
}

SubtaskEval evaluate_subtask(const env::TaskEnv& env, const Policy& policy,
                             const StartDistribution& starts, std::size_t episodes,
                             std::uint64_t seed) {
  SubtaskEval ev;
  auto rng = make_rng(seed, {3});
  double sum = 0;
  for (std::size_t e = 0; e < episodes; ++e) {
    const env::DynState s0 = sample_start(env.workspace(), starts, env.dynamics(), rng);
    auto noise = make_rng(seed, {4, e});
    const EpisodeOutcome o = run_episode(env, policy, s0, &noise);
    ++ev.episodes;
    if (o.reached_goal) ++ev.successes;
    if (o.collided) ++ev.collisions;
    sum += o.ret;
  }
  ev.mean_return = episodes ? sum / static_cast<double>(episodes) : 0.0;
  return ev;
}

void write_training_log_csv(std::ostream& os, const std::vector<GenerationLog>& log) {
  os << "generation,mean,max,elite_threshold,elite_mean,best_success\n";
  for (const auto& g : log) {
    os << g.generation << ',' << g.mean << ',' << g.max << ',' << g.elite_threshold << ','
       << g.elite_mean << ',' << g.best_success << '\n';
  }
}

}  // namespace mvtl::policy
