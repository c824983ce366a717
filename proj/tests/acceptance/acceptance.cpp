// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltl_oracle.hpp"
#include "mvtl/cli/random_study.hpp"
#include "mvtl/decomposition/decompose.hpp"
#include "mvtl/env/episode.hpp"
#include "mvtl/ltl/parser.hpp"
#include "mvtl/ltl/translate.hpp"
#include "mvtl/planner/grid_oracle.hpp"
#include "mvtl/planner/tl_rrt_star.hpp"
#include "mvtl/policy/global_policy.hpp"
#include "oracles.hpp"

using namespace mvtl;
using testing::Rational;

namespace {

// Pinned limits.
constexpr double kCorpusSeconds = 60;
constexpr double kMetricSeconds = 10;
constexpr double kOptimalitySeconds = 300;
constexpr double kLengthRatio = 1.25;
constexpr double kLengthSlack = 1e-9;
constexpr std::size_t kPlannerIters = 30000;
constexpr std::size_t kSeeds = 10;
constexpr std::size_t kRandomEpisodes = 10000;
constexpr double kTaskSuccess = 0.9;
constexpr std::size_t kEvalEpisodes = 100;
constexpr double kControlSeconds = 1800;
constexpr std::size_t kStudyTrials = 50;
constexpr std::size_t kStudyGoals = 12;
constexpr double kStudySeconds = 600;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Plans kept from criterion 3 and 4 for the decomposition check.
struct KeptPlan {
  std::string scenario;
  planner::LassoPlan plan;
};
std::vector<KeptPlan> g_plans;

Outcome automaton_correctness() {
  const ltl::Alphabet ap{"a", "b", "c"};
  const auto t0 = Clock::now();
  std::uint64_t words = 0, mismatches = 0;
  std::string first;
  const auto& corpus = testing::formula_corpus();
  for (const auto& text : corpus) {
    const auto f = ltl::parse_ltl(text, ap);
    const auto cmp = testing::compare_on_lassos(f, ltl::to_nba(f, ap), 4, 4);
    words += cmp.words;
    mismatches += cmp.mismatches;
    if (cmp.mismatches && first.empty()) first = text + ": " + cmp.first_mismatch;
  }
  const double s = seconds_since(t0);
  std::ostringstream d;
  d << corpus.size() << " formulas, " << words << " lasso words, " << mismatches << " mismatches, "
    << s << " s (limit " << kCorpusSeconds << ")";
  if (!first.empty()) d << "; first: " << first;
  return {corpus.size() >= 20 && mismatches == 0 && s < kCorpusSeconds, d.str()};
}

Outcome violation_metric() {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, ltl::Alphabet>> cases;
  for (const auto& text : testing::formula_corpus()) cases.push_back({text, ltl::Alphabet{"a", "b", "c"}});
  // Task formulas over 4 to 6 atoms in the workspace vocabulary.
  for (std::size_t n = 3; n <= 5; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back("G" + std::to_string(i));
    names.push_back("O");
    std::string chain = "G" + std::to_string(n), surv = "[]!O";
    for (std::size_t i = n - 1; i >= 1; --i) chain = "G" + std::to_string(i) + " && <>(" + chain + ")";
    for (std::size_t i = 1; i <= n; ++i) surv += " && []<>G" + std::to_string(i);
    cases.push_back({"[]!O && <>(" + chain + ")", ltl::Alphabet(names)});
    cases.push_back({"[]!O && []<>(" + chain + ")", ltl::Alphabet(names)});
    cases.push_back({surv, ltl::Alphabet(names)});
  }
  std::size_t guards = 0, checks = 0, mismatches = 0, max_ap = 0;
  for (const auto& [text, ap] : cases) {
    const auto nba = ltl::to_nba(ltl::parse_ltl(text, ap), ap);
    max_ap = std::max(max_ap, ap.size());
    for (const auto& e : nba.edges()) {
      ++guards;
      for (std::uint32_t s = 0; s < (1u << ap.size()); ++s) {
        ++checks;
        if (ltl::violation_distance(ltl::Symbol(s), e.guard) !=
            testing::brute_force_violation(ltl::Symbol(s), e.guard, ap.size())) {
          ++mismatches;
        }
      }
    }
  }
  const double s = seconds_since(t0);
  std::ostringstream d;
  d << cases.size() << " automata up to |AP|=" << max_ap << ", " << guards << " guards, " << checks
    << " symbol checks, " << mismatches << " mismatches, " << s << " s (limit " << kMetricSeconds << ")";
  return {mismatches == 0 && max_ap == 6 && s < kMetricSeconds, d.str()};
}

struct SeedRun {
  bool ok = true;
  std::string why;
};

// Plans `name` for every seed and compares with the oracle.
SeedRun compare_with_oracle(const std::string& name, bool expect_zero, std::ostream& log) {
  const auto sc = testing::load_scenario_file(name);
  planner::OracleParams op;
  op.eta = sc.eta;
  op.grid_step = 0.25;
  const planner::LassoPlan oracle = planner::grid_oracle_plan(sc.ws, sc.nba, op);
  SeedRun r;
  double worst_ratio = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    planner::PlannerParams pp;
    pp.eta = sc.eta;
    pp.max_iters = kPlannerIters;
    pp.seed = seed;
    planner::LassoPlan plan;
    try {
      plan = planner::plan_lasso(sc.ws, sc.nba, pp);
    } catch (const planner::NoPlanError& e) {
      r.ok = false;
      r.why += " " + name + "/" + std::to_string(seed) + ": no plan";
      continue;
    }
    if (auto bad = planner::check_plan(plan, sc.nba, sc.ws, sc.eta)) {
      r.ok = false;
      r.why += " " + name + "/" + std::to_string(seed) + ": invalid plan (" + *bad + ")";
    }
    const bool same = plan.prefix_violation == oracle.prefix_violation &&
                      plan.suffix_violation == oracle.suffix_violation;
    const bool zero = plan.prefix_violation == 0 && plan.suffix_violation == 0;
    const bool short_enough = plan.length() <= kLengthRatio * oracle.length() + kLengthSlack;
    if (oracle.length() > 0) worst_ratio = std::max(worst_ratio, plan.length() / oracle.length());
    if (!same || !short_enough || (expect_zero && !zero)) {
      r.ok = false;
      std::ostringstream w;
      w << " " << name << "/" << seed << ": violation (" << plan.prefix_violation << ","
        << plan.suffix_violation << ") vs oracle (" << oracle.prefix_violation << ","
        << oracle.suffix_violation << "), length " << plan.length() << " vs " << oracle.length();
      r.why += w.str();
    }
    g_plans.push_back({name, plan});
  }
  log << " " << name << "=(" << oracle.prefix_violation << "," << oracle.suffix_violation
      << ") max-ratio " << worst_ratio << ";";
  return r;
}

Outcome optimality() {
  const auto t0 = Clock::now();
  std::ostringstream d;
  bool ok = true;
  std::string why;
  for (const char* name :
       {"corridor", "enclosed_g3", "two_enclosed", "enclosed_adjacent", "multi_goal"}) {
    const SeedRun r = compare_with_oracle(name, false, d);
    ok = ok && r.ok;
    why += r.why;
  }
  const double s = seconds_since(t0);
  d << " " << kSeeds << " seeds x " << kPlannerIters << " iterations, " << s << " s (limit "
    << kOptimalitySeconds << ")" << why;
  return {ok && s < kOptimalitySeconds, d.str()};
}

Outcome feasibility_generalization() {
  const auto t0 = Clock::now();
  std::ostringstream d;
  bool ok = true;
  std::string why;
  for (const char* name : {"enclosed_g3_open", "two_enclosed_open", "enclosed_adjacent_open"}) {
    const SeedRun r = compare_with_oracle(name, true, d);
    ok = ok && r.ok;
    why += r.why;
  }
  d << " all violations 0 required, " << seconds_since(t0) << " s" << why;
  return {ok, d.str()};
}

// Discounted value of the best goal-free trace (N progress rewards, nothing after) and of the
// worst goal trace (nothing until the goal at row n_bar - 1, absorbing afterwards), built as
// traces and summed exactly.
Rational chain_trace_value(double gamma, double r_plus, std::size_t N) {
  env::Trace t;
  t.gamma = gamma;
  for (std::size_t i = 0; i < N; ++i) t.rows.push_back({i, {}, {}, r_plus, 0, 0, env::Event::Progress});
  return testing::exact_return(t);
}
Rational goal_trace_value(double gamma, double r_pp, std::size_t n_bar) {
  env::Trace t;
  t.gamma = gamma;
  for (std::size_t i = 0; i + 1 < n_bar; ++i) t.rows.push_back({i, {}, {}, 0.0, 0, 0, env::Event::None});
  t.rows.push_back({n_bar - 1, {}, {}, r_pp, 0, 0, env::Event::Goal});
  t.absorbed = true;
  t.absorb_reward = r_pp;
  return testing::exact_return(t);
}

Outcome reward_bound_check() {
  std::size_t cases = 0, held = 0, half_failed = 0;
  std::string counterexample;
  for (double g : {0.6, 0.9, 0.99}) {
    for (std::size_t N : {1u, 5u, 10u, 25u}) {
      for (std::size_t n_bar : {1u, 10u, 100u}) {
        ++cases;
        const double bound = env::reward_bound(g, N, n_bar, 1.0);
        const Rational chain = chain_trace_value(g, 1.0, N);
        if (goal_trace_value(g, bound, n_bar) > chain) ++held;
        if (!(goal_trace_value(g, bound / 2, n_bar) > chain)) {
          ++half_failed;
          if (counterexample.empty() && N == 10 && n_bar == 100 && g == 0.99) {
            std::ostringstream c;
            c << "gamma 0.99, N 10, n_bar 100, r++ = bound/2 = " << bound / 2 << ": J(goal) = "
              << goal_trace_value(g, bound / 2, n_bar).convert_to<double>()
              << " <= J(chain) = " << chain.convert_to<double>();
            counterexample = c.str();
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << "bound held exactly in " << held << "/" << cases << " cases; half bound failed in "
    << half_failed << "/" << cases << "; counterexample: "
    << (counterexample.empty() ? "none" : counterexample);
  return {held == cases && !counterexample.empty(), d.str()};
}

env::RewardCase eq6(bool collision, bool at_goal, bool progress) {
  if (collision) return env::RewardCase::Collision;
  if (at_goal) return env::RewardCase::Goal;
  if (progress) return env::RewardCase::Progress;
  return env::RewardCase::None;
}

Outcome reward_semantics() {
  // Truth table over the three conditions with representative values.
  std::size_t rows = 0, table_bad = 0;
  for (int c = 0; c < 2; ++c) {
    for (int g = 0; g < 2; ++g) {
      for (int p = 0; p < 2; ++p) {
        double D, d_min;
        if (g) {
          D = 0;
          d_min = p ? 1.0 : 0.0;
        } else {
          D = 2;
          d_min = p ? 3.0 : 2.0;
        }
        ++rows;
        if (env::classify_reward(c, D, d_min) != eq6(c, g, p)) ++table_bad;
      }
    }
  }
  // Random episodes on the enclosed-G3 tasks; rewards recomputed independently.
  const auto sc = testing::load_scenario_file("enclosed_g3");
  planner::PlannerParams pp;
  pp.eta = sc.eta;
  pp.max_iters = 3000;
  const auto tasks = decomposition::decompose(planner::plan_lasso(sc.ws, sc.nba, pp), 2 * sc.eta);
  const env::EnvConfig cfg;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(0.0, 10.0), uth(-3.2, 3.2), uv(0.0, 1.0), uw(-2.0, 2.0);
  std::size_t episodes = 0, steps = 0, monotone_bad = 0, reward_bad = 0;
  const auto all = tasks.all();
  while (episodes < kRandomEpisodes) {
    const auto* task = all[episodes % all.size()];
    const auto env = env::make_task_env(sc.ws, *task, cfg);
    const geometry::Vec p{ux(rng), ux(rng), 0};
    if (sc.ws.in_obstacle(p)) continue;
    ++episodes;
    env::EpisodeState es = env.reset(env.dynamics().make_state(p, uth(rng), {}));
    while (!es.done) {
      const geometry::Vec before = env.dynamics().position(es.s);
      const double d_min = es.d_min;
      const env::StepResult r = env.step(es, {uv(rng), uw(rng), 0});
      ++steps;
      const geometry::Vec x = env.dynamics().position(es.s);
      bool collision = !sc.ws.in_bounds(x) || !sc.ws.segment_collision_free(before, x);
      for (const auto& o : sc.ws.obstacles()) collision = collision || testing::raw_contains(o, x);
      double D = env::kInfiniteD;
      if (!collision) {
        for (std::size_t i = 0; i < task->waypoints.size(); ++i) {
          if (geometry::dist(x, task->waypoints[i]) <= task->radius) D = std::min(D, task->dist_to_go[i]);
        }
      }
      const double want = env::reward_value(eq6(collision, D == 0, D < d_min), env.spec());
      if (r.reward != want) ++reward_bad;
      if (es.d_min > d_min) ++monotone_bad;
    }
  }
  std::ostringstream d;
  d << rows << "-row truth table, " << table_bad << " mismatches; " << episodes << " random episodes, "
    << steps << " steps, " << reward_bad << " reward mismatches, " << monotone_bad
    << " d_min increases";
  return {table_bad == 0 && reward_bad == 0 && monotone_bad == 0, d.str()};
}

Outcome decomposition_consistency() {
  std::size_t checked = 0, bad = 0;
  std::string first;
  for (const auto& kept : g_plans) {
    const auto sc = testing::load_scenario_file(kept.scenario);
    const auto tasks = decomposition::decompose(kept.plan, 2 * sc.eta);
    const auto seg = decomposition::segment_violations(kept.plan, sc.nba, sc.ws);
    std::uint64_t pre = 0, suf = 0;
    for (auto v : seg.prefix) pre += v;
    for (auto v : seg.suffix) suf += v;
    bool ok = decomposition::flatten(tasks) == decomposition::plan_path(kept.plan) &&
              pre == kept.plan.prefix_violation && suf == kept.plan.suffix_violation &&
              seg.prefix.size() == tasks.prefix_tasks.size() && seg.suffix.size() == tasks.suffix_tasks.size();
    for (std::size_t i = 0; ok && i < seg.prefix.size(); ++i) ok = seg.prefix[i] == tasks.prefix_tasks[i].violation;
    for (std::size_t i = 0; ok && i < seg.suffix.size(); ++i) ok = seg.suffix[i] == tasks.suffix_tasks[i].violation;
    const auto back = decomposition::tasks_from_json(decomposition::tasks_to_json(tasks, 2), 2);
    ok = ok && decomposition::tasks_to_json(back, 2) == decomposition::tasks_to_json(tasks, 2);
    ++checked;
    if (!ok) {
      ++bad;
      if (first.empty()) first = kept.scenario + " seed " + std::to_string(kept.plan.seed);
    }
  }
  std::ostringstream d;
  d << checked << " plans, " << bad << " inconsistent" << (first.empty() ? "" : "; first: " + first);
  return {checked > 0 && bad == 0, d.str()};
}

Outcome end_to_end_control() {
  const auto t0 = Clock::now();
  const auto sc = testing::load_scenario_file("enclosed_g3");
  planner::PlannerParams pp;
  pp.eta = sc.eta;
  pp.max_iters = kPlannerIters;
  const planner::LassoPlan plan = planner::plan_lasso(sc.ws, sc.nba, pp);
  const auto tasks = decomposition::decompose(plan, 2 * sc.eta);
  const auto starts = policy::start_distributions(sc.ws, tasks);
  const env::EnvConfig cfg;
  const auto all = tasks.all();
  std::vector<policy::Policy> policies;
  double worst_task = 1.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto env = env::make_task_env(sc.ws, *all[i], cfg);
    policy::CemBudget b;
    b.seed = 1000003 + i;
    const auto r = policy::train_subtask(env, starts[i], b);
    const auto ev = policy::evaluate_subtask(env, r.policy, starts[i], kEvalEpisodes, 5000 + i);
    worst_task = std::min(worst_task, ev.success_rate());
    policies.push_back(r.policy);
  }
  const auto gp = policy::concatenate(tasks, policies);
  const auto m = policy::evaluate(gp, sc.ws, cfg, kEvalEpisodes, 2, 99, 1);
  const double s = seconds_since(t0);
  std::ostringstream d;
  d << all.size() << " tasks, plan suffix violation " << plan.suffix_violation
    << ", worst per-task success " << worst_task << " (need " << kTaskSuccess << "), global success "
    << m.success_rate << ", violation per cycle " << m.mean_violation_per_cycle
    << (m.cycle_violation_matches ? " on every successful cycle" : " NOT on every cycle")
    << ", handoff failure rate " << m.handoff_failure_rate << ", " << s << " s (limit "
    << kControlSeconds << ")";
  const bool ok = plan.suffix_violation == 1 && worst_task >= kTaskSuccess && m.success_rate > 0 &&
                  m.cycle_violation_matches && m.mean_violation_per_cycle == 1.0 && s < kControlSeconds;
  return {ok, d.str()};
}

Outcome random_study() {
  const auto t0 = Clock::now();
  cli::StudyParams p;
  p.trials = kStudyTrials;
  p.n_goals = kStudyGoals;
  const auto summary = cli::run_random_study(p, 1);
  std::size_t relaxed = 0, relaxed_ok = 0, enclosed = 0, enclosed_failed = 0, open = 0, open_ok = 0;
  std::size_t fill_disagree = 0;
  for (const auto& row : summary.rows) {
    if (row.mode == "relaxed") {
      ++relaxed;
      relaxed_ok += row.planned;
      // Independent flood fill on the regenerated scenario.
      const auto sc = cli::generate_random_scenario(p, row.seed);
      const auto fill = testing::flood_fill_enclosed(sc.ws, 0.1);
      const std::size_t n = static_cast<std::size_t>(std::count(fill.begin(), fill.end(), true));
      if (n != row.enclosed) ++fill_disagree;
    } else if (row.enclosed > 0) {
      ++enclosed;
      enclosed_failed += !row.planned;
    } else {
      ++open;
      open_ok += row.planned;
    }
  }
  const double s = seconds_since(t0);
  std::ostringstream d;
  d << "relaxed " << relaxed_ok << "/" << relaxed << "; feasible-only failed on " << enclosed_failed
    << "/" << enclosed << " scenarios with an enclosed goal and solved " << open_ok << "/" << open
    << " without; flood-fill disagreements " << fill_disagree << "; " << s << " s (limit "
    << kStudySeconds << ")";
  const bool ok = relaxed == kStudyTrials && relaxed_ok == relaxed && enclosed > 0 &&
                  enclosed_failed == enclosed && fill_disagree == 0 && s < kStudySeconds;
  return {ok, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"automaton correctness", automaton_correctness},
      {"violation metric", violation_metric},
      {"minimum-violation optimality", optimality},
      {"feasibility generalization", feasibility_generalization},
      {"goal reward bound", reward_bound_check},
      {"reward semantics", reward_semantics},
      {"decomposition consistency", decomposition_consistency},
      {"end-to-end control", end_to_end_control},
      {"random-goal study", random_study},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].name << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
