#include "mvtl/policy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvtl::policy {

using geometry::Vec;

std::size_t Policy::feature_count(DynamicsKind kind, int dimension) {
  if (kind == DynamicsKind::Dubins) return 5;  // bias, ux, uy, distance, heading error
  return 2 + 2 * static_cast<std::size_t>(dimension);  // bias, u, distance, velocity
}

std::size_t Policy::output_count(DynamicsKind kind, int dimension) {
  return kind == DynamicsKind::Dubins ? 2 : static_cast<std::size_t>(dimension);
}

Policy::Policy(DynamicsKind kind, int dimension) : kind_(kind), dim_(dimension) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("dimension must be 2 or 3");
  if (kind == DynamicsKind::Dubins && dimension != 2) {
    throw std::invalid_argument("Dubins policies need a 2D workspace");
  }
  theta_.assign(feature_count(kind, dimension) * output_count(kind, dimension), 0.0);
}

void Policy::set_theta(std::vector<double> theta) {
  if (theta.size() != theta_.size()) throw std::invalid_argument("policy parameter size mismatch");
  theta_ = std::move(theta);
}

namespace {

std::size_t lookahead(const Vec& x, const env::EpisodeState& es,
                      const decomposition::ReachAvoidTask& task) {
  const std::size_t last = task.waypoints.size() - 1;
  std::size_t k = 0;
  if (es.has_closest) {
    k = std::min(es.closest_index + 1, last);
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= last; ++i) {
      const double d = geometry::dist(x, task.waypoints[i]);
      if (d < best) {
        best = d;
        k = i;
      }
    }
  }
  while (k < last && geometry::dist(x, task.waypoints[k]) < 0.3 * task.radius) ++k;
  return k;
}

}  // namespace

std::vector<double> Policy::features(const env::EpisodeState& es,
                                     const decomposition::ReachAvoidTask& task,
                                     const env::Dynamics& dyn) const {
  const Vec x = dyn.position(es.s);
  const Vec target = task.waypoints[lookahead(x, es, task)];
  Vec d = target - x;
  const double dn = geometry::norm(d);
  const Vec u = dn > 1e-12 ? d * (1.0 / dn) : Vec{};
  const double scaled = std::min(dn / task.radius, 3.0);
  std::vector<double> f;
  f.reserve(feature_count(kind_, dim_));
  if (kind_ == DynamicsKind::Dubins) {
    const double c = std::cos(es.s[2]);
    const double s = std::sin(es.s[2]);
    const double bx = c * u.x + s * u.y;
    const double by = -s * u.x + c * u.y;
    f = {1.0, bx, by, scaled, dn > 1e-12 ? std::atan2(by, bx) / std::numbers::pi : 0.0};
  } else {
    f.push_back(1.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) f.push_back(u[i]);
    f.push_back(scaled);
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
      f.push_back(es.s[3 + i] / dyn.params().v_max);
    }
  }
  return f;
}

Action Policy::act(const env::EpisodeState& es, const decomposition::ReachAvoidTask& task,
                   const env::Dynamics& dyn) const {
  const std::vector<double> f = features(es, task, dyn);
  const std::size_t nf = f.size();
  auto dotrow = [&](std::size_t row) {
    double acc = 0;
    for (std::size_t i = 0; i < nf; ++i) acc += theta_[row * nf + i] * f[i];
    return acc;
  };
  const auto& p = dyn.params();
  Action a{0, 0, 0};
  if (kind_ == DynamicsKind::Dubins) {
    a[0] = p.v_max / (1.0 + std::exp(-dotrow(0)));
    a[1] = p.omega_max * std::tanh(dotrow(1));
  } else {
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
      a[i] = p.a_max * std::tanh(dotrow(i));
    }
  }
  return a;
}

nlohmann::json policy_to_json(const Policy& p) {
  return {{"version", 1},
          {"features",
           {{"kind", p.kind() == DynamicsKind::Dubins ? "dubins_lookahead" : "quad_lookahead"},
            {"dimension", p.dimension()},
            {"count", Policy::feature_count(p.kind(), p.dimension())},
            {"outputs", Policy::output_count(p.kind(), p.dimension())}}},
          {"dynamics", env::to_string(p.kind())},
          {"theta", p.theta()}};
}

Policy policy_from_json(const nlohmann::json& j) {
  try {
    Policy p(env::dynamics_kind_from_string(j.at("dynamics").get<std::string>()),
             j.at("features").at("dimension").get<int>());
    p.set_theta(j.at("theta").get<std::vector<double>>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed policy file: ") + e.what());
  }
}

env::DynState sample_start(const geometry::Workspace& ws, const StartDistribution& dist,
                           const env::Dynamics& dyn, std::mt19937_64& rng) {
  if (dist.centers.empty()) throw std::invalid_argument("start distribution has no centers");
  std::uniform_int_distribution<std::size_t> pick(0, dist.centers.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vec center = dist.centers[pick(rng)];
  Vec pos = center;
  if (dist.radius > 0) {
    const int dim = ws.dimension();
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Vec p;
      for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
        p[i] = center[i] + (2 * u(rng) - 1) * dist.radius;
      }
      if (geometry::dist(p, center) > dist.radius) continue;
      if (!ws.in_bounds(p) || ws.in_obstacle(p) || !ws.segment_collision_free(center, p)) continue;
      pos = p;
      break;
    }
  }
  const double heading = 2 * std::numbers::pi * u(rng);
  Vec vel;
  if (dyn.params().kind == DynamicsKind::KinematicQuad) {
    const double speed = 0.5 * dyn.params().v_max * u(rng);
    Vec dir;
    if (ws.dimension() == 3) {
      const double z = 2 * u(rng) - 1;
      const double rho = std::sqrt(1 - z * z);
      dir = Vec{rho * std::cos(heading), rho * std::sin(heading), z};
    } else {
      dir = Vec{std::cos(heading), std::sin(heading), 0};
    }
    vel = dir * speed;
  }
  return dyn.make_state(pos, heading, vel);
}

std::vector<StartDistribution> start_distributions(const geometry::Workspace& ws,
                                                   const decomposition::TaskLasso& tasks) {
  std::vector<StartDistribution> out;
  const auto all = tasks.all();
  const std::size_t np = tasks.prefix_tasks.size();
  for (std::size_t i = 0; i < all.size(); ++i) {
    StartDistribution d;
    if (i == 0) {
      d.centers = {ws.x0()};
      d.radius = 0;
    } else {
      d.radius = all[i]->radius;
      d.centers = {all[i - 1]->goal()};
      // The first suffix task is also entered from the end of every cycle.
      if (i == np && tasks.suffix_tasks.back().goal() != d.centers.front()) {
        d.centers.push_back(tasks.suffix_tasks.back().goal());
      }
    }
    out.push_back(std::move(d));
  }
  if (np == 0 && !tasks.suffix_tasks.empty()) {
    out[0].centers.push_back(tasks.suffix_tasks.back().goal());
  }
  return out;
}

EpisodeOutcome run_episode(const env::TaskEnv& env, const Policy& policy, const env::DynState& s0,
                           std::mt19937_64* noise_rng, env::Trace* trace) {
  env::EpisodeState es = env.reset(s0);
  EpisodeOutcome out;
  double g = 1.0;
  const double gamma = env.spec().gamma;
  if (trace) {
    trace->rows.clear();
    trace->gamma = gamma;
    trace->violations.clear();
  }
  if (es.done) {
    // Started inside the goal ball: the goal reward is collected from step 0.
    out.reached_goal = true;
    out.ret = env.absorb() ? env.spec().r_plusplus / (1 - gamma) : env.spec().r_plusplus;
    if (trace) {
      trace->rows.push_back({0, es.s, {0, 0, 0}, env.spec().r_plusplus, 0.0, 0.0, env::Event::Goal});
      trace->absorbed = env.absorb();
      trace->absorb_reward = env.spec().r_plusplus;
      trace->violations.push_back(es.violation);
    }
    return out;
  }
  while (!es.done) {
    const Action a = policy.act(es, env.task(), env.dynamics());
    const env::StepResult r = env.step(es, a, noise_rng);
    out.ret += g * r.reward;
    g *= gamma;
    if (trace) trace->rows.push_back({es.t, es.s, a, r.reward, r.D, es.d_min, r.event});
    if (r.event == env::Event::Collision) out.collided = true;
  }
  out.reached_goal = es.reached_goal;
  out.steps = es.t;
  if (es.reached_goal && env.absorb()) out.ret += g * env.spec().r_plusplus / (1 - gamma);
  if (trace) {
    trace->absorbed = es.reached_goal && env.absorb();
    trace->absorb_reward = env.spec().r_plusplus;
    if (es.reached_goal) trace->violations.push_back(es.violation);
  }
  return out;
}

}  // namespace mvtl::policy
