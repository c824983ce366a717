#include "mvtl/cli/random_study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <ostream>
#include <random>
#include <thread>

#include "mvtl/ltl/parser.hpp"
#include "mvtl/ltl/translate.hpp"
#include "mvtl/planner/tl_rrt_star.hpp"

namespace mvtl::cli {

using geometry::Box;
using geometry::Shape;
using geometry::Vec;

namespace {

constexpr double kRingGap = 0.1;        // ring inner edge to goal disc
constexpr double kRingThickness = 0.15;
constexpr double kClearance = 0.2;      // random boxes keep this far from goals and x0

std::string chain_formula(std::size_t n) {
  std::string inner = "G" + std::to_string(n);
  for (std::size_t i = n - 1; i >= 1; --i) {
    inner = "G" + std::to_string(i) + " && <>(" + inner + ")";
  }
  return "[]!O && <>(" + inner + ")";
}

std::vector<Shape> ring(const Vec& c, double radius) {
  const double a = radius + kRingGap;
  const double w = kRingThickness;
  return {
      Shape::box({c.x - a - w, c.y - a - w, 0}, {c.x + a + w, c.y - a, 0}, 2),
      Shape::box({c.x - a - w, c.y + a, 0}, {c.x + a + w, c.y + a + w, 0}, 2),
      Shape::box({c.x - a - w, c.y - a, 0}, {c.x - a, c.y + a, 0}, 2),
      Shape::box({c.x + a, c.y - a, 0}, {c.x + a + w, c.y + a, 0}, 2),
  };
}

double box_distance(const Box& b, const Vec& p) {
  const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
  const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
  return std::hypot(dx, dy);
}

}  // namespace

RandomScenario generate_random_scenario(const StudyParams& params, std::uint64_t trial_seed) {
  if (params.n_goals == 0) throw std::invalid_argument("random study needs at least one goal");
  std::seed_seq seq{trial_seed, std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double E = params.extent;
  const double R = 2.0 * params.eta;
  const double outer = R + kRingGap + kRingThickness;  // ring half-size
  auto uniform_in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const Vec x0{uniform_in(0.5, E - 0.5), uniform_in(0.5, E - 0.5), 0};
  std::vector<Vec> centers;
  for (std::size_t attempt = 0; centers.size() < params.n_goals; ++attempt) {
    if (attempt > 100000) throw std::runtime_error("could not place the random goals");
    const Vec c{uniform_in(outer + 0.05, E - outer - 0.05), uniform_in(outer + 0.05, E - outer - 0.05),
                0};
    if (dist(c, x0) < outer + 0.3) continue;
    const bool clash = std::any_of(centers.begin(), centers.end(),
                                   [&](const Vec& o) { return dist(c, o) < 2 * outer + 0.3; });
    if (!clash) centers.push_back(c);
  }

  std::vector<bool> ringed(params.n_goals, false);
  if (unit(rng) < params.enclosed_probability) {
    const std::size_t k = 1 + static_cast<std::size_t>(unit(rng) < 0.5);
    for (std::size_t i = 0; i < k; ++i) {
      ringed[static_cast<std::size_t>(unit(rng) * static_cast<double>(params.n_goals)) %
             params.n_goals] = true;
    }
  }

  std::vector<Shape> obstacles;
  const std::size_t n_boxes =
      params.min_boxes + static_cast<std::size_t>(unit(rng) * static_cast<double>(
                                                               params.max_boxes - params.min_boxes + 1));
  const double mean_area = params.coverage * E * E / static_cast<double>(std::max<std::size_t>(n_boxes, 1));
  for (std::size_t placed = 0, attempt = 0; placed < n_boxes && attempt < 100000; ++attempt) {
    const double area = mean_area * uniform_in(0.5, 1.5);
    const double aspect = uniform_in(0.33, 3.0);
    const double w = std::sqrt(area * aspect);
    const double h = area / w;
    if (w >= E || h >= E) continue;
    const double x = uniform_in(0, E - w);
    const double y = uniform_in(0, E - h);
    const Box b{{x, y, 0}, {x + w, y + h, 0}};
    if (box_distance(b, x0) < kClearance) continue;
    const bool hits_goal = std::any_of(centers.begin(), centers.end(), [&](const Vec& c) {
      return box_distance(b, c) < outer + kClearance;
    });
    if (hits_goal) continue;
    obstacles.push_back(Shape::box(b.min, b.max, 2));
    ++placed;
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!ringed[i]) continue;
    for (Shape& s : ring(centers[i], R)) obstacles.push_back(std::move(s));
  }

  std::vector<std::string> names;
  for (std::size_t i = 1; i <= params.n_goals; ++i) names.push_back("G" + std::to_string(i));
  names.push_back("O");
  ltl::Alphabet ap(names);
  std::vector<geometry::Region> regions;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    regions.push_back({i, Shape::ball(centers[i], R, 2)});
  }
  geometry::Workspace ws(2, Box{{0, 0, 0}, {E, E, 0}}, ap, std::move(regions), std::move(obstacles),
                         x0, params.n_goals);
  return {std::move(ws), chain_formula(params.n_goals), std::move(ringed)};
}

std::vector<bool> enclosed_goals(const geometry::Workspace& ws, double step) {
  const Box& b = ws.bounds();
  const auto nx = static_cast<std::size_t>(std::floor((b.max.x - b.min.x) / step));
  const auto ny = static_cast<std::size_t>(std::floor((b.max.y - b.min.y) / step));
  auto centre = [&](std::size_t i, std::size_t j) {
    return Vec{b.min.x + (static_cast<double>(i) + 0.5) * step,
               b.min.y + (static_cast<double>(j) + 0.5) * step, 0};
  };
  std::vector<char> seen(nx * ny, 0);
  std::deque<std::size_t> queue;
  const Vec& x0 = ws.x0();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const Vec c = centre(i, j);
      if (dist(c, x0) <= 1.5 * step && ws.segment_collision_free(x0, c)) {
        seen[i * ny + j] = 1;
        queue.push_back(i * ny + j);
      }
    }
  }
  std::vector<bool> reached(ws.regions().size(), false);
  for (std::size_t r = 0; r < ws.regions().size(); ++r) {
    reached[r] = !ws.in_obstacle(x0) && ws.regions()[r].shape.contains(x0);
  }
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const std::size_t i = id / ny, j = id % ny;
    const Vec c = centre(i, j);
    for (std::size_t r = 0; r < ws.regions().size(); ++r) {
      if (!reached[r] && ws.regions()[r].shape.contains(c)) reached[r] = true;
    }
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const auto ni = static_cast<std::ptrdiff_t>(i) + di;
        const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
        if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(nx) ||
            nj >= static_cast<std::ptrdiff_t>(ny)) {
          continue;
        }
        const std::size_t nid = static_cast<std::size_t>(ni) * ny + static_cast<std::size_t>(nj);
        if (seen[nid]) continue;
        if (!ws.segment_collision_free(c, centre(static_cast<std::size_t>(ni),
                                                 static_cast<std::size_t>(nj)))) {
          continue;
        }
        seen[nid] = 1;
        queue.push_back(nid);
      }
    }
  }
  std::vector<bool> enclosed(reached.size());
  for (std::size_t r = 0; r < reached.size(); ++r) enclosed[r] = !reached[r];
  return enclosed;
}

StudySummary run_random_study(const StudyParams& params, std::size_t jobs) {
  for (const std::string& m : params.modes) {
    if (m != "relaxed" && m != "feasible-only") {
      throw std::invalid_argument("unknown study mode '" + m + "' (relaxed | feasible-only)");
    }
  }
  const std::size_t per_trial = params.modes.size();
  std::vector<StudyRow> rows(params.trials * per_trial);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < params.trials; t = next++) {
      const std::uint64_t seed = params.seed + t;
      const RandomScenario sc = generate_random_scenario(params, seed);
      const auto enclosed = enclosed_goals(sc.ws, params.eta / 4);
      const std::size_t n_enclosed =
          static_cast<std::size_t>(std::count(enclosed.begin(), enclosed.end(), true));
      const ltl::Nba nba = ltl::to_nba(ltl::parse_ltl(sc.formula, sc.ws.alphabet()), sc.ws.alphabet());
      for (std::size_t m = 0; m < per_trial; ++m) {
        StudyRow row;
        row.mode = params.modes[m];
        row.seed = seed;
        row.enclosed = n_enclosed;
        planner::PlannerParams pp;
        pp.eta = params.eta;
        pp.max_iters = params.max_iters;
        pp.seed = seed;
        pp.feasible_only = row.mode == "feasible-only";
        try {
          const planner::LassoPlan plan = planner::plan_lasso(sc.ws, nba, pp);
          row.planned = true;
          row.prefix_violation = plan.prefix_violation;
          row.suffix_violation = plan.suffix_violation;
          row.length = plan.length();
        } catch (const planner::NoPlanError&) {
          row.planned = false;
        }
        rows[t * per_trial + m] = row;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, params.trials));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  StudySummary summary;
  summary.rows = std::move(rows);
  for (std::size_t m = 0; m < per_trial; ++m) {
    std::size_t ok = 0;
    for (std::size_t t = 0; t < params.trials; ++t) ok += summary.rows[t * per_trial + m].planned;
    summary.success_rate.push_back(params.trials ? static_cast<double>(ok) / static_cast<double>(params.trials)
                                                 : 0.0);
  }
  return summary;
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << "mode,seed,planned,prefix_violation,suffix_violation,violation,length,enclosed_goals\n";
  for (const StudyRow& r : rows) {
    os << r.mode << ',' << r.seed << ',' << (r.planned ? 1 : 0) << ',';
    if (r.planned) {
      os << r.prefix_violation << ',' << r.suffix_violation << ','
         << r.prefix_violation + r.suffix_violation << ',' << r.length;
    } else {
      os << ",,,";
    }
    os << ',' << r.enclosed << '\n';
  }
}

}  // namespace mvtl::cli
