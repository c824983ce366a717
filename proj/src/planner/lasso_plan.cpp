#include "mvtl/planner/lasso_plan.hpp"

#include <cmath>
#include <stdexcept>

namespace mvtl::planner {

void LassoPlan::recompute_totals() {
  prefix_violation = suffix_violation = 0;
  prefix_length = suffix_length = 0;
  for (const EdgeCost& c : prefix_costs) {
    prefix_violation += c.viol;
    prefix_length += c.geom;
  }
  for (const EdgeCost& c : suffix_costs) {
    suffix_violation += c.viol;
    suffix_length += c.geom;
  }
}

double total_violation(const LassoPlan& plan, double beta) {
  return static_cast<double>(plan.prefix_violation) +
         beta * static_cast<double>(plan.suffix_violation);
}

std::optional<std::string> check_plan(const LassoPlan& plan, const ltl::Nba& nba,
                                      const geometry::Workspace& ws, double eta) {
  if (plan.prefix.empty() || plan.suffix.empty()) return "empty prefix or suffix";
  if (plan.prefix.front().x != ws.x0()) return "prefix does not start at x0";
  if (!nba.is_initial(plan.prefix.front().q)) return "prefix does not start in an initial state";
  if (!(plan.prefix.back() == plan.suffix.front())) return "suffix does not start where prefix ends";
  if (!nba.is_accepting(plan.suffix.front().q)) return "suffix root is not accepting";
  if (plan.prefix_costs.size() + 1 != plan.prefix.size()) return "prefix cost count mismatch";
  if (plan.suffix_costs.size() != plan.suffix.size()) return "suffix cost count mismatch";

  auto check = [&](const ProductState& a, const ProductState& b, const EdgeCost& c,
                   const std::string& where) -> std::optional<std::string> {
    auto e = product_edge(a, b, nba, ws, eta);
    if (!e) return where + ": not a product transition";
    if (e->viol != c.viol) return where + ": violation mismatch";
    if (std::abs(e->geom - c.geom) > 1e-9 * (1.0 + c.geom)) return where + ": length mismatch";
    return std::nullopt;
  };
  for (std::size_t i = 0; i + 1 < plan.prefix.size(); ++i) {
    if (auto err = check(plan.prefix[i], plan.prefix[i + 1], plan.prefix_costs[i],
                         "prefix step " + std::to_string(i))) {
      return err;
    }
  }
  for (std::size_t i = 0; i < plan.suffix.size(); ++i) {
    if (auto err = check(plan.suffix[i], plan.suffix[(i + 1) % plan.suffix.size()],
                         plan.suffix_costs[i], "suffix step " + std::to_string(i))) {
      return err;
    }
  }
  LassoPlan copy = plan;
  copy.recompute_totals();
  if (copy.prefix_violation != plan.prefix_violation ||
      copy.suffix_violation != plan.suffix_violation) {
    return "violation totals do not match the edge costs";
  }
  return std::nullopt;
}

namespace {

nlohmann::json states_to_json(const std::vector<ProductState>& states,
                              const std::vector<EdgeCost>& costs, int dim) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    nlohmann::json s = {{"x", geometry::vec_to_json(states[i].x, dim)}, {"q", states[i].q}};
    if (i < costs.size()) {
      s["edge_length"] = costs[i].geom;
      s["edge_violation"] = costs[i].viol;
    }
    arr.push_back(std::move(s));
  }
  return arr;
}

void states_from_json(const nlohmann::json& arr, int dim, std::vector<ProductState>& states,
                      std::vector<EdgeCost>& costs, bool closing) {
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& s = arr[i];
    states.push_back(ProductState{geometry::vec_from_json(s.at("x"), dim), s.at("q").get<StateId>()});
    const bool has_edge = closing || i + 1 < arr.size();
    if (has_edge) {
      costs.push_back(EdgeCost{s.at("edge_length").get<double>(),
                               s.at("edge_violation").get<std::uint32_t>()});
    }
  }
}

}  // namespace

nlohmann::json plan_to_json(const LassoPlan& plan, int dimension) {
  return {
      {"version", 1},
      {"prefix", states_to_json(plan.prefix, plan.prefix_costs, dimension)},
      {"suffix", states_to_json(plan.suffix, plan.suffix_costs, dimension)},
      {"violation", {{"prefix", plan.prefix_violation}, {"suffix", plan.suffix_violation}}},
      {"length",
       {{"prefix", plan.prefix_length}, {"suffix", plan.suffix_length}, {"total", plan.length()}}},
      {"seed", plan.seed},
      {"iters", plan.iters},
  };
}

LassoPlan plan_from_json(const nlohmann::json& j, int dimension) {
  LassoPlan p;
  try {
    states_from_json(j.at("prefix"), dimension, p.prefix, p.prefix_costs, false);
    states_from_json(j.at("suffix"), dimension, p.suffix, p.suffix_costs, true);
    p.seed = j.value("seed", std::uint64_t{0});
    p.iters = j.value("iters", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed plan: ") + e.what());
  }
  p.recompute_totals();
  return p;
}

}  // namespace mvtl::planner
