#include "mvtl/planner/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "mvtl/planner/tl_rrt_star.hpp"

namespace mvtl::planner {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kSource = kUnset - 1;

struct Key {
  std::uint64_t viol = std::numeric_limits<std::uint64_t>::max();
  double len = std::numeric_limits<double>::infinity();

  bool operator<(const Key& o) const { return viol != o.viol ? viol < o.viol : len < o.len; }
};

Key extend(const Key& k, const EdgeCost& e) { return Key{k.viol + e.viol, k.len + e.geom}; }

struct Graph {
  std::vector<Vec> points;
  std::vector<ltl::Symbol> labels;
  std::vector<bool> blocked;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // excludes self
};

Graph build_graph(const geometry::Workspace& ws, const OracleParams& p, std::size_t nq) {
  const int dim = ws.dimension();
  const double h = p.grid_step;
  if (!(h > 0)) throw std::invalid_argument("grid_step must be positive");
  if (h * std::sqrt(static_cast<double>(dim)) > p.eta * (1 + 1e-12)) {
    throw std::invalid_argument("grid_step * sqrt(dimension) must not exceed eta");
  }
  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<double, 3> start{0, 0, 0};
  double cells = 1;
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
    const double extent = ws.bounds().max[i] - ws.bounds().min[i];
    n[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(extent / h)));
    start[i] = ws.bounds().min[i] + (extent - static_cast<double>(n[i] - 1) * h) / 2;
    cells *= static_cast<double>(n[i]);
  }
  if (cells * static_cast<double>(nq) > static_cast<double>(p.max_product_nodes)) {
    const double factor = std::pow(cells * static_cast<double>(nq) /
                                       static_cast<double>(p.max_product_nodes),
                                   1.0 / dim);
    const double suggested = h * factor * 1.01;
    throw GridTooLargeError("grid of " + std::to_string(static_cast<std::size_t>(cells)) +
                                " cells x " + std::to_string(nq) +
                                " automaton states exceeds the node budget; try grid_step >= " +
                                std::to_string(suggested),
                            suggested);
  }

  Graph g;
  auto add = [&](const Vec& x) {
    g.points.push_back(x);
    g.labels.push_back(ws.label_of(x));
    g.blocked.push_back(ws.in_obstacle(x));
  };
  add(ws.x0());
  std::vector<std::uint32_t> cell_id(n[0] * n[1] * n[2], kUnset);
  auto flat = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * n[1] + j) * n[0] + i; };
  for (std::size_t k = 0; k < n[2]; ++k) {
    for (std::size_t j = 0; j < n[1]; ++j) {
      for (std::size_t i = 0; i < n[0]; ++i) {
        Vec x{start[0] + static_cast<double>(i) * h, start[1] + static_cast<double>(j) * h,
              dim == 3 ? start[2] + static_cast<double>(k) * h : 0.0};
        if (ws.in_obstacle(x)) continue;
        cell_id[flat(i, j, k)] = static_cast<std::uint32_t>(g.points.size());
        add(x);
      }
    }
  }
  g.adj.assign(g.points.size(), {});
  auto link = [&](std::uint32_t a, std::uint32_t b) {
    const double d = geometry::dist(g.points[a], g.points[b]);
    if (d > p.eta || !ws.segment_collision_free(g.points[a], g.points[b])) return;
    g.adj[a].emplace_back(b, d);
  };
  const long zr = dim == 3 ? 1 : 0;
  for (std::size_t k = 0; k < n[2]; ++k) {
    for (std::size_t j = 0; j < n[1]; ++j) {
      for (std::size_t i = 0; i < n[0]; ++i) {
        const std::uint32_t a = cell_id[flat(i, j, k)];
        if (a == kUnset) continue;
        for (long dz = -zr; dz <= zr; ++dz) {
          for (long dy = -1; dy <= 1; ++dy) {
            for (long dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0 && dz == 0) continue;
              const long ii = static_cast<long>(i) + dx, jj = static_cast<long>(j) + dy,
                         kk = static_cast<long>(k) + dz;
              if (ii < 0 || jj < 0 || kk < 0 || ii >= static_cast<long>(n[0]) ||
                  jj >= static_cast<long>(n[1]) || kk >= static_cast<long>(n[2])) {
                continue;
              }
              const std::uint32_t b = cell_id[flat(static_cast<std::size_t>(ii),
                                                   static_cast<std::size_t>(jj),
                                                   static_cast<std::size_t>(kk))];
              if (b != kUnset) link(a, b);
            }
          }
        }
      }
    }
  }
  // x0 joins the lattice through the cells of its neighbourhood.
  if (!g.blocked[0]) {
    const double reach = std::min(p.eta, h * std::sqrt(static_cast<double>(dim)));
    for (std::uint32_t b = 1; b < g.points.size(); ++b) {
      if (geometry::dist(g.points[0], g.points[b]) <= reach) {
        link(0, b);
        link(b, 0);
      }
    }
  }
  return g;
}

class ProductSearch {
 public:
  ProductSearch(const Graph& g, const ltl::Nba& nba, bool feasible_only)
      : g_(g), nba_(nba), nq_(nba.num_states()), feasible_only_(feasible_only) {
    for (StateId q = 0; q < nq_; ++q) succ_.push_back(nba.successors(q));
    const std::size_t total = g.points.size() * nq_;
    dist_.assign(total, Key{});
    parent_.assign(total, kUnset);
    in_edge_.assign(total, EdgeCost{});
    done_.assign(total, false);
    seen_.assign(total, false);
  }

  std::size_t size() const { return dist_.size(); }
  std::uint32_t id(std::uint32_t v, StateId q) const { return static_cast<std::uint32_t>(v * nq_ + q); }
  std::uint32_t vertex(std::uint32_t id) const { return static_cast<std::uint32_t>(id / nq_); }
  StateId state(std::uint32_t id) const { return static_cast<StateId>(id % nq_); }

  template <class F>
  void for_each_edge(std::uint32_t from, F&& f) const {
    const std::uint32_t v = vertex(from);
    if (g_.blocked[v]) return;
    const StateId q = state(from);
    for (StateId q2 : succ_[q]) {
      const std::uint32_t viol = ltl::violation_distance(g_.labels[v], nba_.edge(q, q2)->guard);
      if (feasible_only_ && viol > 0) continue;
      f(id(v, q2), EdgeCost{0.0, viol});
      for (const auto& [w, d] : g_.adj[v]) f(id(w, q2), EdgeCost{d, viol});
    }
  }

  /// Forward search from the given sources at zero cost.
  void run_from(const std::vector<std::uint32_t>& sources) {
    reset();
    for (std::uint32_t s : sources) {
      set(s, Key{0, 0.0}, kSource, EdgeCost{});
    }
    run(std::nullopt, [](const Key&) { return false; });
  }

  /// Cheapest cycle through `a`; abandons the search once `stop(key)` holds.
  template <class Stop>
  std::optional<Key> cycle(std::uint32_t a, Stop stop) {
    reset();
    for_each_edge(a, [&](std::uint32_t to, const EdgeCost& e) {
      const Key k = extend(Key{0, 0.0}, e);
      if (k < dist_[to]) set(to, k, kSource, e);
    });
    return run(a, stop);
  }

  const Key& dist(std::uint32_t id) const { return dist_[id]; }
  std::uint32_t parent(std::uint32_t id) const { return parent_[id]; }
  const EdgeCost& in_edge(std::uint32_t id) const { return in_edge_[id]; }

  Vec point(std::uint32_t id) const { return g_.points[vertex(id)]; }

 private:
  struct Item {
    Key key;
    std::uint32_t id;
    bool operator>(const Item& o) const {
      if (key.viol != o.key.viol) return key.viol > o.key.viol;
      if (key.len != o.key.len) return key.len > o.key.len;
      return id > o.id;
    }
  };

  void reset() {
    for (std::uint32_t t : touched_) {
      dist_[t] = Key{};
      parent_[t] = kUnset;
      done_[t] = false;
      seen_[t] = false;
    }
    touched_.clear();
    heap_ = {};
  }

  void set(std::uint32_t id, const Key& k, std::uint32_t parent, const EdgeCost& e) {
    if (!seen_[id]) {
      seen_[id] = true;
      touched_.push_back(id);
    }
    dist_[id] = k;
    parent_[id] = parent;
    in_edge_[id] = e;
    heap_.push(Item{k, id});
  }

  template <class Stop>
  std::optional<Key> run(std::optional<std::uint32_t> target, Stop stop) {
    while (!heap_.empty()) {
      const Item it = heap_.top();
      heap_.pop();
      if (done_[it.id] || dist_[it.id] < it.key) continue;
      if (stop(it.key)) return std::nullopt;
      done_[it.id] = true;
      if (target && it.id == *target) return it.key;
      for_each_edge(it.id, [&](std::uint32_t to, const EdgeCost& e) {
        if (done_[to]) return;
        const Key k = extend(it.key, e);
        if (k < dist_[to]) set(to, k, it.id, e);
      });
    }
    return std::nullopt;
  }

  const Graph& g_;
  const ltl::Nba& nba_;
  std::size_t nq_;
  bool feasible_only_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<Key> dist_;
  std::vector<std::uint32_t> parent_;
  std::vector<EdgeCost> in_edge_;
  std::vector<bool> done_;
  std::vector<bool> seen_;
  std::vector<std::uint32_t> touched_;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap_;
};

}  // namespace

LassoPlan grid_oracle_plan(const geometry::Workspace& ws, const ltl::Nba& nba,
                           const OracleParams& params, OracleStats* stats) {
  if (nba.alphabet().names() != ws.alphabet().names()) {
    throw std::invalid_argument("automaton and workspace use different alphabets");
  }
  const Graph g = build_graph(ws, params, nba.num_states());
  ProductSearch fwd(g, nba, params.feasible_only);
  std::vector<std::uint32_t> sources;
  for (StateId q0 : nba.initial()) sources.push_back(fwd.id(0, q0));
  fwd.run_from(sources);

  struct Candidate {
    std::uint32_t id;
    Key key;
  };
  std::vector<Candidate> accepting;
  std::vector<bool> reached(nba.num_states(), false);
  for (std::uint32_t i = 0; i < fwd.size(); ++i) {
    if (fwd.dist(i).viol == Key{}.viol) continue;
    reached[fwd.state(i)] = true;
    if (nba.is_accepting(fwd.state(i))) accepting.push_back({i, fwd.dist(i)});
  }
  std::sort(accepting.begin(), accepting.end(), [](const Candidate& a, const Candidate& b) {
    if (a.key < b.key) return true;
    if (b.key < a.key) return false;
    return a.id < b.id;
  });
  if (stats) {
    stats->cells = g.points.size() - 1;
    stats->product_nodes = fwd.size();
    stats->accepting_reached = accepting.size();
  }
  std::vector<StateId> reached_ids;
  for (StateId q = 0; q < reached.size(); ++q) {
    if (reached[q]) reached_ids.push_back(q);
  }
  if (accepting.empty()) {
    throw NoPlanError("no path reaches an accepting automaton state on the grid", reached_ids);
  }

  using Lasso = std::tuple<std::uint64_t, std::uint64_t, double>;
  std::optional<Lasso> best;
  std::uint32_t best_node = 0;
  std::vector<ProductState> best_suffix;
  std::vector<EdgeCost> best_suffix_costs;
  ProductSearch cyc(g, nba, params.feasible_only);
  for (const Candidate& a : accepting) {
    if (best && !(Lasso{0, a.key.viol, a.key.len} < *best)) break;  // sorted by prefix key
    if (stats) ++stats->cycle_searches;
    auto found = cyc.cycle(a.id, [&](const Key& k) {
      return best && !(Lasso{k.viol, a.key.viol, a.key.len + k.len} < *best);
    });
    if (!found) continue;
    const Lasso l{found->viol, a.key.viol, a.key.len + found->len};
    if (best && !(l < *best)) continue;
    best = l;
    best_node = a.id;
    // Walk back from the closing edge into a to the first step out of a.
    std::vector<std::uint32_t> chain;
    for (std::uint32_t n = cyc.parent(a.id); n != kSource; n = cyc.parent(n)) chain.push_back(n);
    std::reverse(chain.begin(), chain.end());
    best_suffix = {ProductState{cyc.point(a.id), fwd.state(a.id)}};
    best_suffix_costs.clear();
    for (std::uint32_t n : chain) {
      best_suffix.push_back(ProductState{cyc.point(n), cyc.state(n)});
      best_suffix_costs.push_back(cyc.in_edge(n));
    }
    best_suffix_costs.push_back(cyc.in_edge(a.id));
  }
  if (!best) {
    throw NoPlanError("accepting states are reachable but lie on no cycle", reached_ids);
  }

  LassoPlan plan;
  std::vector<std::uint32_t> chain;
  for (std::uint32_t n = best_node; n != kSource; n = fwd.parent(n)) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    plan.prefix.push_back(ProductState{fwd.point(chain[i]), fwd.state(chain[i])});
    if (i > 0) plan.prefix_costs.push_back(fwd.in_edge(chain[i]));
  }
  plan.suffix = std::move(best_suffix);
  plan.suffix_costs = std::move(best_suffix_costs);
  plan.recompute_totals();
  return plan;
}

}  // namespace mvtl::planner
