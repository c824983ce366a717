#include "mvtl/cli/app.hpp"

#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "mvtl/cli/commands.hpp"
#include "mvtl/io/json_io.hpp"
#include "mvtl/ltl/parser.hpp"

namespace mvtl::cli {

namespace {

/// Command-line values; unset ones leave the scenario or default value alone.
struct Overrides {
  std::string scenario;
  std::string formula;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::size_t jobs = 1;
  std::string config_file;
  std::optional<std::size_t> iters;
  std::optional<double> eta;
  std::optional<double> beta;
  std::optional<double> grid_step;
  bool feasible_only = false;
  std::optional<std::size_t> generations;
  std::optional<std::size_t> pop;
  std::optional<std::size_t> episodes;
  std::optional<std::size_t> cycles;
  std::optional<std::string> dynamics;
};

RunConfig build_config(const Overrides& o) {
  if (o.scenario.empty()) throw ConfigError("--scenario is required for this command");
  if (!std::filesystem::exists(o.scenario)) throw ConfigError("scenario file not found: " + o.scenario);
  if (!o.config_file.empty() && !std::filesystem::exists(o.config_file)) {
    throw ConfigError("config file not found: " + o.config_file);
  }
  RunConfig cfg;
  cfg.scenario = o.scenario;
  cfg.formula = o.formula;
  cfg.seed = o.seed;
  cfg.out = o.out;
  cfg.jobs = o.jobs;
  apply_config_json(io::read_json(cfg.scenario), cfg);
  if (!o.config_file.empty()) {
    apply_config_json({{"config", io::read_json(o.config_file)}}, cfg);
  }
  if (o.eta) {
    if (!(*o.eta > 0)) throw ConfigError("--eta must be positive");
    cfg.planner.eta = *o.eta;
  }
  cfg.oracle.eta = cfg.planner.eta;
  if (o.iters) cfg.planner.max_iters = *o.iters;
  if (o.beta) cfg.planner.beta = *o.beta;
  if (o.grid_step) cfg.oracle.grid_step = *o.grid_step;
  if (o.feasible_only) cfg.planner.feasible_only = true;
  if (o.generations) cfg.budget.generations = *o.generations;
  if (o.pop) cfg.budget.pop = *o.pop;
  if (o.episodes) cfg.eval_episodes = *o.episodes;
  if (o.cycles) cfg.horizon_cycles = *o.cycles;
  if (o.dynamics) cfg.env.dyn.kind = env::dynamics_kind_from_string(*o.dynamics);
  if (cfg.planner.max_iters == 0) throw ConfigError("--iters must be at least 1");
  if (cfg.jobs == 0) throw ConfigError("--jobs must be at least 1");
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-violation temporal-logic planning and control"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--scenario", o.scenario, "Scenario JSON file");
  app.add_option("--formula", o.formula, "LTL formula overriding the scenario's");
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  app.add_option("--config", o.config_file, "JSON file with the scenario 'config' layout");

  auto* plan = app.add_subcommand("plan", "Minimum-violation lasso plan -> plan.json");
  auto* oracle = app.add_subcommand("oracle", "Grid oracle certification -> oracle_report.json");
  for (auto* sub : {plan, oracle}) {
    sub->add_option("--iters", o.iters, "Prefix tree iterations");
    sub->add_option("--eta", o.eta, "Maximum edge length");
    sub->add_option("--beta", o.beta, "Violation weight (default 1e4 x diameter)");
    sub->add_flag("--feasible-only", o.feasible_only, "Forbid transitions with positive violation");
  }
  oracle->add_option("--grid-step", o.grid_step, "Oracle cell size");
  auto* decompose = app.add_subcommand("decompose", "Reach-avoid tasks -> tasks.json");
  auto* train = app.add_subcommand("train", "Cross-entropy training -> policies/, logs/");
  train->add_option("--generations", o.generations, "CEM generations");
  train->add_option("--pop", o.pop, "CEM population");
  auto* eval = app.add_subcommand("eval", "Policy evaluation -> metrics.json");
  eval->add_option("--episodes", o.episodes, "Evaluation episodes");
  eval->add_option("--cycles", o.cycles, "Suffix cycles per global episode");
  for (auto* sub : {train, eval}) {
    sub->add_option("--dynamics", o.dynamics, "dubins | quad")->check(CLI::IsMember({"dubins", "quad"}));
  }
  auto* report = app.add_subcommand("report", "Learning curves -> report/*.dat");

  StudyParams study;
  std::vector<std::string> modes;
  auto* rs = app.add_subcommand("random-study", "Random-goal plan success study -> random_study.csv");
  rs->add_option("--trials", study.trials, "Number of random scenarios")->capture_default_str();
  rs->add_option("--goals", study.n_goals, "Goals per scenario")->capture_default_str();
  rs->add_option("--iters", study.max_iters, "Planner iterations per run")->capture_default_str();
  rs->add_option("--eta", study.eta, "Maximum edge length; goal radius is twice this")
      ->capture_default_str();
  rs->add_option("--mode", modes, "relaxed and/or feasible-only (default both)")
      ->check(CLI::IsMember({"relaxed", "feasible-only"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rs->parsed()) {
      study.seed = o.seed;
      if (!modes.empty()) study.modes = modes;
      if (study.trials == 0 || study.n_goals == 0 || !(study.eta > 0) || study.max_iters == 0) {
        throw ConfigError("random-study needs positive --trials, --goals, --eta and --iters");
      }
      return cmd_random_study(study, o.out, std::max<std::size_t>(o.jobs, 1), out);
    }
    const RunConfig cfg = build_config(o);
    if (plan->parsed()) return cmd_plan(cfg, out);
    if (oracle->parsed()) return cmd_oracle(cfg, out);
    if (decompose->parsed()) return cmd_decompose(cfg, out);
    if (train->parsed()) return cmd_train(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (report->parsed()) return cmd_report(cfg, out);
    err << "error: no command\n";
    return kExitUsage;
  } catch (const planner::NoPlanError& e) {
    err << "no plan: " << e.what() << "\nautomaton states reached:";
    for (auto q : e.reached_states()) err << ' ' << q;
    err << "\n";
    return kExitNoPlan;
  } catch (const planner::GridTooLargeError& e) {
    err << "error: " << e.what() << "\nsuggested --grid-step " << e.suggested_step() << "\n";
    return kExitUsage;
  } catch (const io::JsonParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const geometry::ScenarioError& e) {
    err << "error: scenario: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ltl::SyntaxError& e) {
    err << "error: formula: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ltl::UndeclaredAtomError& e) {
    err << "error: formula: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MissingArtifactError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace mvtl::cli
