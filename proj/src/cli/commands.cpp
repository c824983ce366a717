#include "mvtl/cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mvtl/decomposition/decompose.hpp"
#include "mvtl/io/atomic_file.hpp"
#include "mvtl/io/json_io.hpp"
#include "mvtl/policy/global_policy.hpp"

namespace mvtl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path require(const fs::path& p, const std::string& producer) {
  if (!fs::exists(p)) throw MissingArtifactError(p, producer);
  return p;
}

void print_warnings(const Scenario& sc, std::ostream& out) {
  for (const auto& w : sc.warnings) out << "warning: " << w << "\n";
}

double resolved_beta(const RunConfig& cfg, const geometry::Workspace& ws) {
  return cfg.planner.beta > 0 ? cfg.planner.beta : planner::default_beta(ws);
}

planner::PlannerParams planner_params(const RunConfig& cfg) {
  planner::PlannerParams p = cfg.planner;
  p.seed = cfg.seed;
  return p;
}

json plan_document(const planner::LassoPlan& plan, const Scenario& sc, double beta) {
  json j = planner::plan_to_json(plan, sc.ws.dimension());
  j["formula"] = sc.formula_text;
  j["beta"] = beta;
  j["weighted_violation"] = planner::total_violation(plan, beta);
  return j;
}

planner::LassoPlan load_plan(const RunConfig& cfg, const Scenario& sc) {
  const json j = io::read_json(require(cfg.out / "plan.json", "plan"));
  planner::LassoPlan plan = planner::plan_from_json(j, sc.ws.dimension());
  if (auto problem = planner::check_plan(plan, sc.nba, sc.ws, cfg.planner.eta)) {
    throw std::runtime_error((cfg.out / "plan.json").string() +
                             " does not match the scenario: " + *problem);
  }
  return plan;
}

decomposition::TaskLasso load_tasks(const RunConfig& cfg, const Scenario& sc) {
  const json j = io::read_json(require(cfg.out / "tasks.json", "decompose"));
  return decomposition::tasks_from_json(j.at("tasks"), sc.ws.dimension());
}

fs::path policy_path(const RunConfig& cfg, std::size_t i) {
  return cfg.out / "policies" / ("task_" + std::to_string(i) + ".json");
}

fs::path log_path(const RunConfig& cfg, std::size_t i) {
  return cfg.out / "logs" / ("task_" + std::to_string(i) + ".csv");
}

std::uint64_t task_seed(std::uint64_t seed, std::size_t i, std::uint64_t salt) {
  return seed * 1000003ULL + salt * 10007ULL + i;
}

}  // namespace

int cmd_plan(const RunConfig& cfg, std::ostream& out) {
  const Scenario sc = load_scenario(cfg);
  print_warnings(sc, out);
  planner::PlannerStats stats;
  const planner::LassoPlan plan = planner::plan_lasso(sc.ws, sc.nba, planner_params(cfg), &stats);
  const double beta = resolved_beta(cfg, sc.ws);
  io::write_json(cfg.out / "plan.json", plan_document(plan, sc, beta));
  io::write_json(cfg.out / "automaton.json", ltl::nba_to_json(sc.nba));
  out << "plan: automaton states " << sc.nba.num_states() << ", prefix violation "
      << plan.prefix_violation << ", suffix violation " << plan.suffix_violation << ", length "
      << plan.length() << " (" << plan.prefix.size() << "+" << plan.suffix.size() << " states)\n"
      << "wrote " << (cfg.out / "plan.json").string() << "\n";
  return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const Scenario sc = load_scenario(cfg);
  print_warnings(sc, out);
  planner::OracleParams op = cfg.oracle;
  op.eta = cfg.planner.eta;
  op.feasible_only = cfg.planner.feasible_only;
  planner::OracleStats ostats;
  const planner::LassoPlan oracle = planner::grid_oracle_plan(sc.ws, sc.nba, op, &ostats);
  const double beta = resolved_beta(cfg, sc.ws);

  planner::LassoPlan plan;
  if (fs::exists(cfg.out / "plan.json")) {
    plan = load_plan(cfg, sc);
  } else {
    plan = planner::plan_lasso(sc.ws, sc.nba, planner_params(cfg));
    io::write_json(cfg.out / "plan.json", plan_document(plan, sc, beta));
  }
  io::write_json(cfg.out / "oracle_plan.json", plan_document(oracle, sc, beta));

  const double ratio = oracle.length() > 0 ? plan.length() / oracle.length() : (plan.length() > 0 ? -1 : 1);
  const bool equal = plan.prefix_violation == oracle.prefix_violation &&
                     plan.suffix_violation == oracle.suffix_violation;
  const json report = {
      {"planner", {{"prefix_violation", plan.prefix_violation},
                   {"suffix_violation", plan.suffix_violation},
                   {"weighted_violation", planner::total_violation(plan, beta)},
                   {"length", plan.length()}}},
      {"oracle", {{"prefix_violation", oracle.prefix_violation},
                  {"suffix_violation", oracle.suffix_violation},
                  {"weighted_violation", planner::total_violation(oracle, beta)},
                  {"length", oracle.length()},
                  {"grid_step", op.grid_step},
                  {"free_cells", ostats.cells},
                  {"product_nodes", ostats.product_nodes}}},
      {"violations_equal", equal},
      {"length_ratio", ratio},
  };
  io::write_json(cfg.out / "oracle_report.json", report);
  out << "planner violation (" << plan.prefix_violation << ", " << plan.suffix_violation
      << ") length " << plan.length() << "\n"
      << "oracle  violation (" << oracle.prefix_violation << ", " << oracle.suffix_violation
      << ") length " << oracle.length() << "\n"
      << "violations " << (equal ? "equal" : "DIFFER") << ", length ratio " << ratio << "\n";
  return kExitOk;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const Scenario sc = load_scenario(cfg);
  const planner::LassoPlan plan = load_plan(cfg, sc);
  const decomposition::TaskLasso tasks = decomposition::decompose(plan, cfg.radius());
  const auto seg = decomposition::segment_violations(plan, sc.nba, sc.ws);
  const json j = {
      {"version", 1},
      {"radius", cfg.radius()},
      {"tasks", decomposition::tasks_to_json(tasks, sc.ws.dimension())},
      {"segment_violations", {{"prefix", seg.prefix}, {"suffix", seg.suffix}}},
  };
  io::write_json(cfg.out / "tasks.json", j);
  out << "decompose: " << tasks.prefix_tasks.size() << " prefix + " << tasks.suffix_tasks.size()
      << " suffix tasks, radius " << cfg.radius() << "\n"
      << "wrote " << (cfg.out / "tasks.json").string() << "\n";
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const Scenario sc = load_scenario(cfg);
  const decomposition::TaskLasso tasks = load_tasks(cfg, sc);
  const auto all = tasks.all();
  const auto starts = policy::start_distributions(sc.ws, tasks);
  json summary = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const env::TaskEnv env = env::make_task_env(sc.ws, *all[i], cfg.env);
    policy::CemBudget budget = cfg.budget;
    budget.seed = task_seed(cfg.seed, i, 1);
    budget.jobs = cfg.jobs;
    const policy::TrainResult r = policy::train_subtask(env, starts[i], budget);
    io::write_json(policy_path(cfg, i), policy::policy_to_json(r.policy));
    std::ostringstream log;
    policy::write_training_log_csv(log, r.log);
    io::write_file_atomic(log_path(cfg, i), log.str());
    summary.push_back({{"task", i},
                       {"r_plusplus", env.spec().r_plusplus},
                       {"n_bar", env.spec().n_bar},
                       {"t_max", env.t_max()},
                       {"final_elite_mean", r.log.empty() ? 0.0 : r.log.back().elite_mean},
                       {"reached_goal", r.reached_goal},
                       {"warning", r.warning}});
    out << "task " << i << ": " << all[i]->waypoints.size() << " waypoints, elite mean "
        << (r.log.empty() ? 0.0 : r.log.back().elite_mean)
        << (r.warning.empty() ? "" : "  warning: " + r.warning) << "\n";
  }
  io::write_json(cfg.out / "train_summary.json", {{"tasks", summary}});
  out << "wrote " << all.size() << " policies under " << (cfg.out / "policies").string() << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const Scenario sc = load_scenario(cfg);
  const decomposition::TaskLasso tasks = load_tasks(cfg, sc);
  const auto all = tasks.all();
  std::vector<policy::Policy> policies;
  for (std::size_t i = 0; i < all.size(); ++i) {
    policies.push_back(policy::policy_from_json(io::read_json(require(policy_path(cfg, i), "train"))));
  }
  const auto starts = policy::start_distributions(sc.ws, tasks);
  json per_task = json::array();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const env::TaskEnv env = env::make_task_env(sc.ws, *all[i], cfg.env);
    const policy::SubtaskEval ev = policy::evaluate_subtask(env, policies[i], starts[i],
                                                            cfg.eval_episodes, task_seed(cfg.seed, i, 2));
    per_task.push_back({{"task", i},
                        {"episodes", ev.episodes},
                        {"success_rate", ev.success_rate()},
                        {"collisions", ev.collisions},
                        {"mean_return", ev.mean_return}});
    out << "task " << i << ": success " << ev.success_rate() << ", collisions " << ev.collisions << "\n";
  }
  std::uint64_t expected = 0;
  for (const auto& t : tasks.suffix_tasks) expected += t.violation;
  const policy::GlobalPolicy gp = policy::concatenate(tasks, policies);
  const policy::GlobalMetrics m = policy::evaluate(gp, sc.ws, cfg.env, cfg.eval_episodes,
                                                   cfg.horizon_cycles, task_seed(cfg.seed, 0, 3), expected);
  const json j = {
      {"version", 1},
      {"tasks", per_task},
      {"global",
       {{"episodes", m.episodes},
        {"horizon_cycles", cfg.horizon_cycles},
        {"success_rate", m.success_rate},
        {"mean_violation_per_cycle", m.mean_violation_per_cycle},
        {"planned_violation_per_cycle", expected},
        {"cycle_violation_matches", m.cycle_violation_matches},
        {"mean_prefix_violation", m.mean_prefix_violation},
        {"mean_return", m.mean_return},
        {"collision_rate", m.collision_rate},
        {"timeout_rate", m.timeout_rate},
        {"handoff_failure_rate", m.handoff_failure_rate}}},
  };
  io::write_json(cfg.out / "metrics.json", j);
  out << "global: success " << m.success_rate << ", violation per cycle "
      << m.mean_violation_per_cycle << " (planned " << expected << "), collisions "
      << m.collision_rate << "\n"
      << "wrote " << (cfg.out / "metrics.json").string() << "\n";
  return kExitOk;
}

int cmd_random_study(const StudyParams& params, const fs::path& out_dir, std::size_t jobs,
                     std::ostream& out) {
  const StudySummary s = run_random_study(params, jobs);
  std::ostringstream csv;
  write_study_csv(csv, s.rows);
  io::write_file_atomic(out_dir / "random_study.csv", csv.str());
  json rates = json::object();
  for (std::size_t m = 0; m < params.modes.size(); ++m) rates[params.modes[m]] = s.success_rate[m];
  std::size_t with_enclosed = 0;
  for (std::size_t t = 0; t < params.trials; ++t) with_enclosed += s.rows[t * params.modes.size()].enclosed > 0;
  io::write_json(out_dir / "random_study.json",
                 {{"trials", params.trials},
                  {"n_goals", params.n_goals},
                  {"seed", params.seed},
                  {"max_iters", params.max_iters},
                  {"trials_with_enclosed_goal", with_enclosed},
                  {"success_rate", rates}});
  for (std::size_t m = 0; m < params.modes.size(); ++m) {
    out << params.modes[m] << ": success rate " << s.success_rate[m] << "\n";
  }
  out << "trials with an enclosed goal: " << with_enclosed << "/" << params.trials << "\n"
      << "wrote " << (out_dir / "random_study.csv").string() << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  require(log_path(cfg, 0), "train");
  std::size_t written = 0;
  for (std::size_t i = 0; fs::exists(log_path(cfg, i)); ++i) {
    std::istringstream in(io::read_file(log_path(cfg, i)));
    std::string line;
    std::getline(in, line);  // header
    std::ostringstream dat;
    dat << "# generation mean max elite_threshold elite_mean best_success\n";
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      for (char& c : line) {
        if (c == ',') c = ' ';
      }
      dat << line << "\n";
    }
    io::write_file_atomic(cfg.out / "report" / ("task_" + std::to_string(i) + ".dat"), dat.str());
    ++written;
  }
  out << "wrote " << written << " learning-curve files under " << (cfg.out / "report").string() << "\n";
  return kExitOk;
}

}  // namespace mvtl::cli
