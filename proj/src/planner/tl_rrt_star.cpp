#include "mvtl/planner/tl_rrt_star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "mvtl/planner/spatial_index.hpp"

namespace mvtl::planner {

double default_beta(const geometry::Workspace& ws) { return 1e4 * ws.diameter(); }

namespace {

constexpr std::int32_t kNone = -1;
#ifdef NDEBUG
constexpr bool kDebugAudit = false;
#else
constexpr bool kDebugAudit = true;
#endif

/// Shared read-only context plus a violation-distance cache.
class Context {
 public:
  Context(const geometry::Workspace& ws, const ltl::Nba& nba, const PlannerParams& p)
      : ws(ws), nba(nba), params(p), beta(p.beta > 0 ? p.beta : default_beta(ws)) {
    for (StateId q = 0; q < nba.num_states(); ++q) succ.push_back(nba.successors(q));
  }

  /// Violation of firing q -> q2 under `label`; nullopt when not allowed.
  std::optional<std::uint32_t> fire(ltl::Symbol label, StateId q, StateId q2) {
    const ltl::NbaEdge* e = nba.edge(q, q2);
    if (!e) return std::nullopt;
    const std::uint64_t key = (static_cast<std::uint64_t>(e - nba.edges().data()) << 32) |
                              label.bits();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, ltl::violation_distance(label, e->guard)).first;
    if (params.feasible_only && it->second > 0) return std::nullopt;
    return it->second;
  }

  const geometry::Workspace& ws;
  const ltl::Nba& nba;
  const PlannerParams& params;
  const double beta;
  std::vector<std::vector<StateId>> succ;

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> cache_;
};

struct Cost {
  double geom = 0;
  std::uint64_t viol = 0;
};

class ProductTree {
 public:
  struct Node {
    std::uint32_t point = 0;
    StateId q = 0;
    std::int32_t parent = kNone;
    Cost cost;
    EdgeCost edge;  // from parent
    std::vector<std::uint32_t> children;
  };
  struct Point {
    Vec x;
    ltl::Symbol label;
    bool blocked = false;  // inside an obstacle: no moves at all
    std::vector<std::int32_t> node_of;  // by automaton state
    std::vector<std::pair<std::uint32_t, double>> adj;  // visible neighbours at insertion time
    bool marked = false;  // queued in fresh_
  };

  ProductTree(Context& ctx, Vec root_x, const std::vector<StateId>& root_qs)
      : ctx_(ctx),
        index_(ctx.ws.bounds().min, ctx.params.eta, ctx.ws.dimension()) {
    const std::uint32_t p = add_point(root_x);
    for (StateId q : root_qs) {
      if (points_[p].node_of[q] != kNone) continue;
      new_node(p, q, kNone, Cost{}, EdgeCost{});
    }
    close_in_place(p);
    spread_new_states();
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Point>& points() const { return points_; }
  const SpatialIndex& index() const { return index_; }

  void grow(std::mt19937_64& rng, std::size_t iters) {
    for (std::size_t it = 0; it < iters; ++it) extend(sample(rng));
  }

  /// Product states from the tree root to `node`, with the incoming edge costs.
  void path_to(std::uint32_t node, std::vector<ProductState>& states,
               std::vector<EdgeCost>& costs) const {
    std::vector<std::uint32_t> chain;
    for (std::int32_t n = static_cast<std::int32_t>(node); n != kNone; n = nodes_[n].parent) {
      chain.push_back(static_cast<std::uint32_t>(n));
    }
    std::reverse(chain.begin(), chain.end());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const Node& n = nodes_[chain[i]];
      states.push_back(ProductState{points_[n.point].x, n.q});
      if (i > 0) costs.push_back(n.edge);
    }
  }

  /// Negative when a is cheaper than b under the weighted cost.
  double compare(const Cost& a, const Cost& b) const {
    return ctx_.beta * (static_cast<double>(a.viol) - static_cast<double>(b.viol)) +
           (a.geom - b.geom);
  }
  bool strictly_better(const Cost& a, const Cost& b) const {
    return compare(a, b) < -1e-12 * (1.0 + std::abs(b.geom));
  }

 private:
  Vec sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& regions = ctx_.ws.regions();
    if (!regions.empty() && u(rng) < ctx_.params.goal_bias) {
      std::uniform_int_distribution<std::size_t> pick(0, regions.size() - 1);
      return regions[pick(rng)].shape.sample(rng);
    }
    return ctx_.ws.sample(rng);
  }

  double near_radius() const {
    const double n = static_cast<double>(points_.size());
    const double gamma = 2.0 * ctx_.ws.diameter();
    const double r = gamma * std::pow(std::log(n) / n, 1.0 / ctx_.ws.dimension());
    return std::min(ctx_.params.eta, r);
  }

  std::uint32_t add_point(const Vec& x) {
    const auto id = static_cast<std::uint32_t>(points_.size());
    Point p;
    p.x = x;
    p.label = ctx_.ws.label_of(x);
    p.blocked = ctx_.ws.in_obstacle(x);
    p.node_of.assign(ctx_.nba.num_states(), kNone);
    points_.push_back(std::move(p));
    index_.insert(id, x);
    return id;
  }

  std::uint32_t new_node(std::uint32_t point, StateId q, std::int32_t parent, Cost cost,
                         EdgeCost edge) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{point, q, parent, cost, edge, {}});
    points_[point].node_of[q] = static_cast<std::int32_t>(id);
    if (parent != kNone) nodes_[parent].children.push_back(id);
    mark(point);
    return id;
  }

  static Cost add(const Cost& c, const EdgeCost& e) { return Cost{c.geom + e.geom, c.viol + e.viol}; }

  /// Offers `parent` + `edge` as a way to reach (point, q). Returns true when
  /// the node was created or improved.
  bool relax(std::uint32_t point, StateId q, std::uint32_t parent, const EdgeCost& edge) {
    const Cost c = add(nodes_[parent].cost, edge);
    const std::int32_t existing = points_[point].node_of[q];
    if (existing == kNone) {
      new_node(point, q, static_cast<std::int32_t>(parent), c, edge);
      return true;
    }
    Node& n = nodes_[existing];
    if (!strictly_better(c, n.cost)) return false;
    if (c.viol < n.cost.viol) mark(point);
    auto& siblings = nodes_[n.parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), static_cast<std::uint32_t>(existing)));
    n.parent = static_cast<std::int32_t>(parent);
    n.edge = edge;
    nodes_[parent].children.push_back(static_cast<std::uint32_t>(existing));
    propagate(static_cast<std::uint32_t>(existing));
    if (ctx_.params.audit || kDebugAudit) audit();
    return true;
  }

  /// Checks that every node's cost is its parent's cost plus the edge cost.
  void audit() const {
    for (const Node& n : nodes_) {
      if (n.parent == kNone) {
        if (n.cost.geom != 0.0 || n.cost.viol != 0) throw std::logic_error("root with nonzero cost");
        continue;
      }
      const Cost expect = add(nodes_[n.parent].cost, n.edge);
      if (expect.viol != n.cost.viol || std::abs(expect.geom - n.cost.geom) > 1e-9 * (1 + expect.geom)) {
        throw std::logic_error("tree cost identity violated after rewiring");
      }
    }
  }

  /// Recomputes costs of the subtree rooted at `root` from its parent.
  void propagate(std::uint32_t root) {
    std::vector<std::uint32_t> stack{root};
    while (!stack.empty()) {
      const std::uint32_t id = stack.back();
      stack.pop_back();
      Node& n = nodes_[id];
      const std::uint32_t old_viol = n.cost.viol;
      n.cost = add(nodes_[n.parent].cost, n.edge);
      if (n.cost.viol < old_viol) mark(n.point);
      stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
  }

  /// Stationary automaton moves at one point, relaxed to a fixpoint.
  void close_in_place(std::uint32_t point) {
    if (points_[point].blocked) return;
    bool changed = true;
    while (changed) {
      changed = false;
      for (StateId q = 0; q < ctx_.nba.num_states(); ++q) {
        const std::int32_t from = points_[point].node_of[q];
        if (from == kNone) continue;
        for (StateId q2 : ctx_.succ[q]) {
          if (q2 == q) continue;
          auto v = ctx_.fire(points_[point].label, q, q2);
          if (!v) continue;
          if (relax(point, q2, static_cast<std::uint32_t>(from), EdgeCost{0.0, *v})) changed = true;
        }
      }
    }
  }

  void mark(std::uint32_t point) {
    if (points_[point].marked) return;
    points_[point].marked = true;
    fresh_.push_back(point);
  }

  /// Offers the states of every marked point to its stored neighbours,
  /// transitively: missing states are created and states whose violation
  /// would drop are rewired. A node is marked only when it is created or its
  /// violation decreases, so the work is bounded; purely geometric
  /// improvements are left to the local rewiring.
  void spread_new_states() {
    for (std::size_t head = 0; head < fresh_.size(); ++head) {
      const std::uint32_t p = fresh_[head];
      points_[p].marked = false;
      if (points_[p].blocked) continue;
      close_in_place(p);
      for (const auto& [y, dy] : points_[p].adj) {
        if (points_[y].blocked) continue;
        for (StateId q = 0; q < ctx_.nba.num_states(); ++q) {
          const std::int32_t from = points_[p].node_of[q];
          if (from == kNone) continue;
          for (StateId q2 : ctx_.succ[q]) {
            auto v = ctx_.fire(points_[p].label, q, q2);
            if (!v) continue;
            const EdgeCost e{dy, *v};
            const std::int32_t there = points_[y].node_of[q2];
            if (there == kNone) {
              new_node(y, q2, from, add(nodes_[from].cost, e), e);
            } else if (nodes_[from].cost.viol + e.viol < nodes_[there].cost.viol) {
              relax(y, q2, static_cast<std::uint32_t>(from), e);
            }
          }
        }
      }
    }
    fresh_.clear();
  }

  void extend(const Vec& x_rand) {
    const std::uint32_t nearest = *index_.nearest(x_rand);
    const Vec& x_near = points_[nearest].x;
    const double d = geometry::dist(x_near, x_rand);
    if (d == 0.0) return;
    const double eta = ctx_.params.eta;
    // Shortened by a few ulps so that the recomputed length stays within eta.
    const Vec x_new = d <= eta ? x_rand : x_near + (x_rand - x_near) * (eta / d * (1.0 - 1e-12));
    if (!ctx_.ws.in_bounds(x_new) || ctx_.ws.in_obstacle(x_new)) return;

    std::vector<std::uint32_t> near = index_.within(x_new, near_radius());
    if (!std::binary_search(near.begin(), near.end(), nearest)) {
      near.insert(std::lower_bound(near.begin(), near.end(), nearest), nearest);
    }
    std::vector<std::pair<std::uint32_t, double>> visible;  // point, distance
    for (std::uint32_t p : near) {
      if (points_[p].blocked) continue;
      const double dp = geometry::dist(points_[p].x, x_new);
      if (dp == 0.0) return;  // duplicate point
      if (dp > ctx_.params.eta) continue;
      if (ctx_.ws.segment_collision_free(points_[p].x, x_new)) visible.emplace_back(p, dp);
    }
    if (visible.empty()) return;

    // Best parent per automaton state of the new point.
    const std::size_t nq = ctx_.nba.num_states();
    std::vector<std::int32_t> best_parent(nq, kNone);
    std::vector<Cost> best_cost(nq);
    std::vector<EdgeCost> best_edge(nq);
    for (const auto& [p, dp] : visible) {
      for (StateId q = 0; q < nq; ++q) {
        const std::int32_t from = points_[p].node_of[q];
        if (from == kNone) continue;
        for (StateId q2 : ctx_.succ[q]) {
          auto v = ctx_.fire(points_[p].label, q, q2);
          if (!v) continue;
          const EdgeCost e{dp, *v};
          const Cost c = add(nodes_[from].cost, e);
          const bool take = best_parent[q2] == kNone || strictly_better(c, best_cost[q2]) ||
                            (!strictly_better(best_cost[q2], c) && from < best_parent[q2]);
          if (take) {
            best_parent[q2] = from;
            best_cost[q2] = c;
            best_edge[q2] = e;
          }
        }
      }
    }
    if (std::all_of(best_parent.begin(), best_parent.end(), [](std::int32_t v) { return v == kNone; })) {
      return;
    }

    const std::uint32_t pn = add_point(x_new);
    for (const auto& [p, dp] : visible) {
      points_[pn].adj.emplace_back(p, dp);
      points_[p].adj.emplace_back(pn, dp);
    }
    for (StateId q = 0; q < nq; ++q) {
      if (best_parent[q] != kNone) new_node(pn, q, best_parent[q], best_cost[q], best_edge[q]);
    }
    close_in_place(pn);

    // Rewire neighbours through the new point.
    for (const auto& [p, dp] : visible) {
      bool touched = false;
      for (StateId q = 0; q < nq; ++q) {
        const std::int32_t from = points_[pn].node_of[q];
        if (from == kNone) continue;
        for (StateId q2 : ctx_.succ[q]) {
          auto v = ctx_.fire(points_[pn].label, q, q2);
          if (!v) continue;
          if (relax(p, q2, static_cast<std::uint32_t>(from), EdgeCost{dp, *v})) touched = true;
        }
      }
      if (touched) close_in_place(p);
    }
    spread_new_states();
  }

  Context& ctx_;
  SpatialIndex index_;
  std::vector<Point> points_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> fresh_;  // marked points awaiting spread_new_states
};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x7d3u};
  return std::mt19937_64(seq);
}

struct Cycle {
  std::uint32_t node = 0;  // last suffix node; closes to the root
  Cost cost;
  EdgeCost closing;
};

std::optional<Cycle> best_cycle(const ProductTree& tree, Context& ctx, const ProductState& root) {
  std::optional<Cycle> best;
  const auto& pts = tree.points();
  for (std::uint32_t p : tree.index().within(root.x, ctx.params.eta)) {
    if (pts[p].blocked || !ctx.ws.segment_collision_free(pts[p].x, root.x)) continue;
    const double d = geometry::dist(pts[p].x, root.x);
    for (StateId q = 0; q < ctx.nba.num_states(); ++q) {
      const std::int32_t n = pts[p].node_of[q];
      if (n == kNone) continue;
      auto v = ctx.fire(pts[p].label, q, root.q);
      if (!v) continue;
      const EdgeCost e{d, *v};
      const Cost c{tree.nodes()[n].cost.geom + d, tree.nodes()[n].cost.viol + *v};
      const bool take = !best || tree.strictly_better(c, best->cost) ||
                        (!tree.strictly_better(best->cost, c) &&
                         static_cast<std::uint32_t>(n) < best->node);
      if (take) best = Cycle{static_cast<std::uint32_t>(n), c, e};
    }
  }
  return best;
}

}  // namespace

LassoPlan plan_lasso(const geometry::Workspace& ws, const ltl::Nba& nba,
                     const PlannerParams& params, PlannerStats* stats) {
  if (params.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(params.eta > 0)) throw std::invalid_argument("eta must be positive");
  if (nba.alphabet().names() != ws.alphabet().names()) {
    throw std::invalid_argument("automaton and workspace use different alphabets");
  }
  Context ctx(ws, nba, params);

  ProductTree prefix(ctx, ws.x0(), nba.initial());
  auto rng = make_rng(params.seed, 0);
  prefix.grow(rng, params.max_iters);

  std::vector<bool> reached(nba.num_states(), false);
  std::vector<std::uint32_t> accepting;
  for (std::uint32_t i = 0; i < prefix.nodes().size(); ++i) {
    const StateId q = prefix.nodes()[i].q;
    reached[q] = true;
    if (nba.is_accepting(q)) accepting.push_back(i);
  }
  std::vector<StateId> reached_ids;
  for (StateId q = 0; q < reached.size(); ++q) {
    if (reached[q]) reached_ids.push_back(q);
  }
  if (stats) {
    stats->prefix_points = prefix.points().size();
    stats->prefix_nodes = prefix.nodes().size();
    stats->accepting_nodes = accepting.size();
    stats->reached_states = reached_ids;
  }
  if (accepting.empty()) {
    std::string list;
    for (StateId q : reached_ids) list += (list.empty() ? "" : ",") + std::to_string(q);
    throw NoPlanError("no prefix reaches an accepting automaton state (reached states: {" + list +
                          "})",
                      reached_ids);
  }

  // Best accepting nodes: one per accepting automaton state first, then the rest.
  const auto& nodes = prefix.nodes();
  std::sort(accepting.begin(), accepting.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double c = prefix.compare(nodes[a].cost, nodes[b].cost);
    if (c != 0.0) return c < 0.0;
    return a < b;
  });
  std::vector<std::uint32_t> roots;
  std::vector<bool> state_used(nba.num_states(), false);
  for (std::uint32_t n : accepting) {
    if (roots.size() >= params.n_roots) break;
    if (!state_used[nodes[n].q]) {
      state_used[nodes[n].q] = true;
      roots.push_back(n);
    }
  }
  for (std::uint32_t n : accepting) {
    if (roots.size() >= params.n_roots) break;
    if (std::find(roots.begin(), roots.end(), n) == roots.end()) roots.push_back(n);
  }
  if (stats) stats->suffix_roots = roots.size();

  const std::size_t suffix_iters =
      params.suffix_iters > 0 ? params.suffix_iters
                              : std::max<std::size_t>(1, params.max_iters / std::max<std::size_t>(1, roots.size()));

  std::optional<LassoPlan> best;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const ProductTree::Node& rn = nodes[roots[r]];
    const ProductState root_state{prefix.points()[rn.point].x, rn.q};
    ProductTree suffix(ctx, root_state.x, {root_state.q});
    auto srng = make_rng(params.seed, r + 1);
    suffix.grow(srng, suffix_iters);
    auto cycle = best_cycle(suffix, ctx, root_state);
    if (!cycle) continue;
    if (stats) ++stats->closed_cycles;

    LassoPlan plan;
    prefix.path_to(roots[r], plan.prefix, plan.prefix_costs);
    suffix.path_to(cycle->node, plan.suffix, plan.suffix_costs);
    plan.suffix_costs.push_back(cycle->closing);
    plan.seed = params.seed;
    plan.iters = params.max_iters;
    plan.recompute_totals();
    if (!best || lasso_key(plan) < lasso_key(*best)) best = std::move(plan);
  }
  if (!best) {
    throw NoPlanError("accepting states were reached but no suffix cycle closed", reached_ids);
  }
  return *best;
}

}  // namespace mvtl::planner
