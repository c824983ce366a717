#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvtl/geometry/workspace.hpp"

namespace mvtl::cli {

struct StudyParams {
  std::size_t n_goals = 12;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  double extent = 12.0;            // square workspace side
  double eta = 0.4;                // goal radius is 2 * eta
  std::size_t min_boxes = 20;
  std::size_t max_boxes = 40;
  double coverage = 0.15;          // target obstacle area fraction
  double enclosed_probability = 0.5;  // chance that a trial rings some goals
  std::size_t max_iters = 6000;
  std::vector<std::string> modes = {"relaxed", "feasible-only"};
};

/// Random scenario: x0, goal discs G1..Gn clear of obstacles, random boxes
/// and possibly rings of four thin boxes sealing some goals.
struct RandomScenario {
  geometry::Workspace ws;
  std::string formula;              // []!O && <>(G1 && <>(G2 && ...))
  std::vector<bool> ringed;         // goals sealed by construction
};

RandomScenario generate_random_scenario(const StudyParams& params, std::uint64_t trial_seed);

/// Goals that no free path from x0 can enter, by flood fill over grid cell
/// centres of side `step` joined by collision-free segments. Reachability is
/// under-approximated, so a gap narrower than about `step` counts as closed.
std::vector<bool> enclosed_goals(const geometry::Workspace& ws, double step);

struct StudyRow {
  std::string mode;
  std::uint64_t seed = 0;
  bool planned = false;
  std::uint64_t prefix_violation = 0;
  std::uint64_t suffix_violation = 0;
  double length = 0;
  std::size_t enclosed = 0;  // goals found sealed by the flood fill
};

struct StudySummary {
  std::vector<StudyRow> rows;
  /// Success rate per mode, in params.modes order.
  std::vector<double> success_rate;
};

/// Runs every mode on every trial scenario. Trial t uses seed params.seed + t
/// for both generation and planning.
StudySummary run_random_study(const StudyParams& params, std::size_t jobs = 1);

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows);

}  // namespace mvtl::cli
