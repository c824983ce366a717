#include "mvtl/cli/config.hpp"

#include <set>

#include "mvtl/io/json_io.hpp"
#include "mvtl/ltl/parser.hpp"
#include "mvtl/ltl/translate.hpp"

namespace mvtl::cli {

MissingArtifactError::MissingArtifactError(const std::filesystem::path& path,
                                           const std::string& producer)
    : std::runtime_error("missing " + path.string() + "; run `mvtl " + producer +
                         "` with the same --out first") {}

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& section, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& dst, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + section + "." + key + "' has the wrong type");
  }
}

void read_positive(const json& j, const char* key, double& dst, const std::string& section) {
  read(j, key, dst, section);
  if (j.contains(key) && !(dst > 0)) throw ConfigError("'" + section + "." + key + "' must be positive");
}

}  // namespace

void apply_config_json(const json& scenario, RunConfig& cfg) {
  if (scenario.contains("eta")) read_positive(scenario, "eta", cfg.planner.eta, "scenario");
  if (!scenario.contains("config")) {
    cfg.oracle.eta = cfg.planner.eta;
    return;
  }
  const json& c = scenario.at("config");
  check_keys(c, "config", {"planner", "oracle", "decomposition", "env", "training", "eval"});

  if (c.contains("planner")) {
    const json& p = c["planner"];
    check_keys(p, "planner",
               {"eta", "beta", "max_iters", "suffix_iters", "n_roots", "goal_bias", "feasible_only"});
    read_positive(p, "eta", cfg.planner.eta, "planner");
    read(p, "beta", cfg.planner.beta, "planner");
    read(p, "max_iters", cfg.planner.max_iters, "planner");
    read(p, "suffix_iters", cfg.planner.suffix_iters, "planner");
    read(p, "n_roots", cfg.planner.n_roots, "planner");
    read(p, "goal_bias", cfg.planner.goal_bias, "planner");
    read(p, "feasible_only", cfg.planner.feasible_only, "planner");
  }
  cfg.oracle.eta = cfg.planner.eta;
  if (c.contains("oracle")) {
    const json& o = c["oracle"];
    check_keys(o, "oracle", {"grid_step", "max_product_nodes"});
    read_positive(o, "grid_step", cfg.oracle.grid_step, "oracle");
    read(o, "max_product_nodes", cfg.oracle.max_product_nodes, "oracle");
  }
  if (c.contains("decomposition")) {
    const json& d = c["decomposition"];
    check_keys(d, "decomposition", {"radius"});
    read_positive(d, "radius", cfg.ball_radius, "decomposition");
  }
  if (c.contains("env")) {
    const json& e = c["env"];
    check_keys(e, "env",
               {"dynamics", "dt", "v_max", "omega_max", "a_max", "noise_std", "gamma", "r_minus",
                "r_plus", "r_plusplus", "absorb", "T_max"});
    if (e.contains("dynamics")) {
      try {
        cfg.env.dyn.kind = env::dynamics_kind_from_string(e["dynamics"].get<std::string>());
      } catch (const std::exception& ex) {
        throw ConfigError(std::string("env.dynamics: ") + ex.what());
      }
    }
    read_positive(e, "dt", cfg.env.dyn.dt, "env");
    read_positive(e, "v_max", cfg.env.dyn.v_max, "env");
    read_positive(e, "omega_max", cfg.env.dyn.omega_max, "env");
    read_positive(e, "a_max", cfg.env.dyn.a_max, "env");
    read(e, "noise_std", cfg.env.dyn.noise_std, "env");
    read(e, "gamma", cfg.env.gamma, "env");
    read(e, "r_minus", cfg.env.r_minus, "env");
    read(e, "r_plus", cfg.env.r_plus, "env");
    if (e.contains("r_plusplus")) {
      const json& v = e["r_plusplus"];
      if (v.is_string() && v.get<std::string>() == "auto") {
        cfg.env.r_plusplus.reset();
      } else if (v.is_number()) {
        cfg.env.r_plusplus = v.get<double>();
      } else {
        throw ConfigError("env.r_plusplus must be \"auto\" or a number");
      }
    }
    read(e, "absorb", cfg.env.absorb, "env");
    if (e.contains("T_max")) {
      std::size_t t = 0;
      read(e, "T_max", t, "env");
      if (t == 0) throw ConfigError("env.T_max must be positive");
      cfg.env.t_max = t;
    }
  }
  if (c.contains("training")) {
    const json& t = c["training"];
    check_keys(t, "training",
               {"pop", "elites", "generations", "episodes_per_candidate", "init_std", "min_std"});
    read(t, "pop", cfg.budget.pop, "training");
    read(t, "elites", cfg.budget.elites, "training");
    read(t, "generations", cfg.budget.generations, "training");
    read(t, "episodes_per_candidate", cfg.budget.episodes_per_candidate, "training");
    read_positive(t, "init_std", cfg.budget.init_std, "training");
    read(t, "min_std", cfg.budget.min_std, "training");
  }
  if (c.contains("eval")) {
    const json& v = c["eval"];
    check_keys(v, "eval", {"episodes", "horizon_cycles"});
    read(v, "episodes", cfg.eval_episodes, "eval");
    read(v, "horizon_cycles", cfg.horizon_cycles, "eval");
  }
}

Scenario load_scenario(const RunConfig& cfg) {
  const json j = io::read_json(cfg.scenario);
  geometry::Workspace ws = geometry::workspace_from_json(j);
  std::string text = cfg.formula;
  if (text.empty()) {
    if (!j.contains("formula") || !j["formula"].is_string()) {
      throw ConfigError("no formula: pass --formula or add a \"formula\" string to " +
                        cfg.scenario.string());
    }
    text = j["formula"].get<std::string>();
  }
  std::vector<ltl::ParseWarning> warnings;
  const ltl::LtlAst ast = ltl::parse_ltl(text, ws.alphabet(), &warnings);
  ltl::Nba nba = ltl::to_nba(ast, ws.alphabet());
  Scenario s{std::move(ws), std::move(text), std::move(nba), {}};
  for (const auto& w : warnings) {
    s.warnings.push_back("formula position " + std::to_string(w.position) + ": " + w.message);
  }
  return s;
}

json config_to_json(const RunConfig& cfg) {
  json r_pp = cfg.env.r_plusplus ? json(*cfg.env.r_plusplus) : json("auto");
  return {
      {"scenario", cfg.scenario.string()},
      {"formula", cfg.formula},
      {"seed", cfg.seed},
      {"planner",
       {{"eta", cfg.planner.eta},
        {"beta", cfg.planner.beta},
        {"max_iters", cfg.planner.max_iters},
        {"suffix_iters", cfg.planner.suffix_iters},
        {"n_roots", cfg.planner.n_roots},
        {"goal_bias", cfg.planner.goal_bias},
        {"feasible_only", cfg.planner.feasible_only}}},
      {"oracle",
       {{"grid_step", cfg.oracle.grid_step}, {"max_product_nodes", cfg.oracle.max_product_nodes}}},
      {"decomposition", {{"radius", cfg.radius()}}},
      {"env",
       {{"dynamics", env::to_string(cfg.env.dyn.kind)},
        {"dt", cfg.env.dyn.dt},
        {"v_max", cfg.env.dyn.v_max},
        {"omega_max", cfg.env.dyn.omega_max},
        {"a_max", cfg.env.dyn.a_max},
        {"noise_std", cfg.env.dyn.noise_std},
        {"gamma", cfg.env.gamma},
        {"r_minus", cfg.env.r_minus},
        {"r_plus", cfg.env.r_plus},
        {"r_plusplus", r_pp},
        {"absorb", cfg.env.absorb},
        {"T_max", cfg.env.t_max ? json(*cfg.env.t_max) : json("auto")}}},
      {"training",
       {{"pop", cfg.budget.pop},
        {"elites", cfg.budget.elites},
        {"generations", cfg.budget.generations},
        {"episodes_per_candidate", cfg.budget.episodes_per_candidate},
        {"init_std", cfg.budget.init_std},
        {"min_std", cfg.budget.min_std}}},
      {"eval", {{"episodes", cfg.eval_episodes}, {"horizon_cycles", cfg.horizon_cycles}}},
  };
}

}  // namespace mvtl::cli
