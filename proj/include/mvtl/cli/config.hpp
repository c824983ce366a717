#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mvtl/env/episode.hpp"
#include "mvtl/ltl/nba.hpp"
#include "mvtl/planner/grid_oracle.hpp"
#include "mvtl/planner/tl_rrt_star.hpp"
#include "mvtl/policy/cem.hpp"

namespace mvtl::cli {

/// A pipeline step needs the output of an earlier command.
class MissingArtifactError : public std::runtime_error {
 public:
  MissingArtifactError(const std::filesystem::path& path, const std::string& producer);
};

/// Invalid option value or configuration key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one pipeline run needs. Seeds are always explicit.
struct RunConfig {
  std::filesystem::path scenario;
  std::string formula;           // empty: taken from the scenario file
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  std::size_t jobs = 1;

  planner::PlannerParams planner;  // eta defaults to the scenario's value
  planner::OracleParams oracle;
  double ball_radius = 0;          // 0: 2 * eta
  env::EnvConfig env;
  policy::CemBudget budget;
  std::size_t eval_episodes = 100;
  std::size_t horizon_cycles = 2;

  double radius() const { return ball_radius > 0 ? ball_radius : 2.0 * planner.eta; }
};

/// Workspace, task formula and automaton of a run.
struct Scenario {
  geometry::Workspace ws;
  std::string formula_text;
  ltl::Nba nba;
  std::vector<std::string> warnings;
};

/// Applies the optional "eta" and "config" sections of a scenario file to
/// `cfg`. Keys of "config": planner{eta,beta,max_iters,suffix_iters,n_roots,
/// goal_bias,feasible_only}, oracle{grid_step,max_product_nodes},
/// decomposition{radius}, env{dynamics,dt,v_max,omega_max,a_max,noise_std,
/// gamma,r_minus,r_plus,r_plusplus ("auto" or a number),absorb,T_max},
/// training{pop,elites,generations,episodes_per_candidate,init_std,min_std},
/// eval{episodes,horizon_cycles}. Unknown keys are rejected.
void apply_config_json(const nlohmann::json& j, RunConfig& cfg);

/// Loads the scenario, parses the formula (the `--formula` override wins) and
/// translates it. Throws on any parse or validation failure.
Scenario load_scenario(const RunConfig& cfg);

/// Configuration echo written next to the outputs.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace mvtl::cli
