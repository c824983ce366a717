#include "mvtl/ltl/translate.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace mvtl::ltl {
namespace {

// ---------------------------------------------------------------------------
// Hash-consed NNF formulas

enum class Fk { True, False, Lit, And, Or, Next, Until, Release };

struct FNode {
  Fk kind = Fk::True;
  int a = -1;
  int b = -1;
  std::uint32_t atom = 0;
  bool positive = true;
};

class Pool {
 public:
  Pool() {
    true_ = intern({Fk::True});
    false_ = intern({Fk::False});
  }

  const FNode& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  int tru() const { return true_; }
  int fls() const { return false_; }

  int lit(std::uint32_t atom, bool positive) {
    FNode n{Fk::Lit};
    n.atom = atom;
    n.positive = positive;
    return intern(n);
  }

  int conj(int x, int y) {
    if (x == false_ || y == false_) return false_;
    if (x == true_) return y;
    if (y == true_ || x == y) return x;
    if (complementary(x, y)) return false_;
    if (x > y) std::swap(x, y);
    return intern({Fk::And, x, y});
  }

  int disj(int x, int y) {
    if (x == true_ || y == true_) return true_;
    if (x == false_) return y;
    if (y == false_ || x == y) return x;
    if (complementary(x, y)) return true_;
    if (x > y) std::swap(x, y);
    return intern({Fk::Or, x, y});
  }

  int next(int x) {
    if (x == true_ || x == false_) return x;
    return intern({Fk::Next, x});
  }

  int until(int x, int y) {
    if (y == true_ || y == false_) return y;
    if (x == false_) return y;
    return intern({Fk::Until, x, y});
  }

  int release(int x, int y) {
    if (y == true_ || y == false_) return y;
    if (x == true_) return y;
    return intern({Fk::Release, x, y});
  }

  /// Conservative syntactic implication g => f.
  bool implies(int g, int f) {
    const std::uint64_t key = (static_cast<std::uint64_t>(g) << 32) | static_cast<std::uint32_t>(f);
    if (auto it = implies_memo_.find(key); it != implies_memo_.end()) return it->second;
    const bool r = implies_uncached(g, f);
    implies_memo_.emplace(key, r);
    return r;
  }

 private:
  int intern(const FNode& n) {
    auto key = std::make_tuple(static_cast<int>(n.kind), n.a, n.b, n.atom, n.positive);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(key, id);
    return id;
  }

  bool complementary(int x, int y) const {
    const FNode& p = at(x);
    const FNode& q = at(y);
    return p.kind == Fk::Lit && q.kind == Fk::Lit && p.atom == q.atom && p.positive != q.positive;
  }

  bool implies_uncached(int g, int f) {
    if (g == f || f == true_ || g == false_) return true;
    const FNode& G = at(g);
    const FNode& F = at(f);
    switch (F.kind) {
      case Fk::Until:
        if (implies(g, F.b)) return true;
        break;
      case Fk::Release:
        if (implies(g, F.a) && implies(g, F.b)) return true;
        break;
      case Fk::Or:
        if (implies(g, F.a) || implies(g, F.b)) return true;
        break;
      case Fk::And:
        if (implies(g, F.a) && implies(g, F.b)) return true;
        break;
      default:
        break;
    }
    switch (G.kind) {
      case Fk::Release: return implies(G.b, f);
      case Fk::Until: return implies(G.a, f) && implies(G.b, f);
      case Fk::And: return implies(G.a, f) || implies(G.b, f);
      case Fk::Or: return implies(G.a, f) && implies(G.b, f);
      default: return false;
    }
  }

  std::vector<FNode> nodes_;
  std::map<std::tuple<int, int, int, std::uint32_t, bool>, int> index_;
  std::unordered_map<std::uint64_t, bool> implies_memo_;
  int true_ = -1;
  int false_ = -1;
};

int to_nnf(Pool& pool, const LtlAst& f, const Alphabet& ap, bool negated) {
  const auto& c = f.children;
  switch (f.kind) {
    case Kind::True:
      return negated ? pool.fls() : pool.tru();
    case Kind::Atom: {
      auto i = ap.index_of(f.atom);
      if (!i) throw std::invalid_argument("atom '" + f.atom + "' is not in the alphabet");
      return pool.lit(static_cast<std::uint32_t>(*i), !negated);
    }
    case Kind::Not:
      return to_nnf(pool, c[0], ap, !negated);
    case Kind::And: {
      const int x = to_nnf(pool, c[0], ap, negated);
      const int y = to_nnf(pool, c[1], ap, negated);
      return negated ? pool.disj(x, y) : pool.conj(x, y);
    }
    case Kind::Or: {
      const int x = to_nnf(pool, c[0], ap, negated);
      const int y = to_nnf(pool, c[1], ap, negated);
      return negated ? pool.conj(x, y) : pool.disj(x, y);
    }
    case Kind::Implies: {
      const int x = to_nnf(pool, c[0], ap, !negated);
      const int y = to_nnf(pool, c[1], ap, negated);
      return negated ? pool.conj(x, y) : pool.disj(x, y);
    }
    case Kind::Next:
      return pool.next(to_nnf(pool, c[0], ap, negated));
    case Kind::Until: {
      const int x = to_nnf(pool, c[0], ap, negated);
      const int y = to_nnf(pool, c[1], ap, negated);
      return negated ? pool.release(x, y) : pool.until(x, y);
    }
    case Kind::Eventually: {
      const int x = to_nnf(pool, c[0], ap, negated);
      return negated ? pool.release(pool.fls(), x) : pool.until(pool.tru(), x);
    }
    case Kind::Always: {
      const int x = to_nnf(pool, c[0], ap, negated);
      return negated ? pool.until(pool.tru(), x) : pool.release(pool.fls(), x);
    }
  }
  throw std::logic_error("unknown formula kind");
}

// ---------------------------------------------------------------------------
// Tableau expansion into transition-based generalized Buchi form

using Obligations = std::vector<int>;  // sorted formula ids

struct Disjunct {
  Cube cube;
  Obligations next;
  std::vector<int> postponed;  // sorted until ids kept pending by this step

  bool operator<(const Disjunct& o) const {
    return std::tie(cube, next, postponed) < std::tie(o.cube, o.next, o.postponed);
  }
  bool operator==(const Disjunct& o) const = default;
};

class Expander {
 public:
  explicit Expander(Pool& pool) : pool_(pool) {}

  std::vector<Disjunct> expand(const Obligations& state) {
    out_.clear();
    Partial p;
    p.todo.assign(state.rbegin(), state.rend());
    run(std::move(p));
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return out_;
  }

  /// Drops obligations implied by another member of the set.
  Obligations simplify(Obligations s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::erase(s, pool_.tru());
    Obligations kept;
    for (std::size_t i = 0; i < s.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < s.size() && !redundant; ++j) {
        if (i == j) continue;
        // Among mutually implying formulas keep the smallest id.
        if (pool_.implies(s[j], s[i]) && !(pool_.implies(s[i], s[j]) && s[i] < s[j])) {
          redundant = true;
        }
      }
      if (!redundant) kept.push_back(s[i]);
    }
    return kept;
  }

 private:
  struct Partial {
    Cube cube;
    std::vector<int> todo;
    std::vector<int> done;  // sorted
    Obligations next;
    std::vector<int> postponed;
  };

  static bool contains(const std::vector<int>& sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
  }
  static void insert(std::vector<int>& sorted, int x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    if (it == sorted.end() || *it != x) sorted.insert(it, x);
  }

  void run(Partial p) {
    while (!p.todo.empty()) {
      const int f = p.todo.back();
      p.todo.pop_back();
      if (contains(p.done, f)) continue;
      insert(p.done, f);
      const FNode& n = pool_.at(f);
      switch (n.kind) {
        case Fk::True:
          break;
        case Fk::False:
          return;
        case Fk::Lit:
          if (n.positive) p.cube.pos |= 1u << n.atom;
          else p.cube.neg |= 1u << n.atom;
          if (!p.cube.consistent()) return;
          break;
        case Fk::And:
          p.todo.push_back(n.b);
          p.todo.push_back(n.a);
          break;
        case Fk::Or: {
          if (contains(p.done, n.a) || contains(p.done, n.b)) break;
          Partial left = p;
          left.todo.push_back(n.a);
          run(std::move(left));
          p.todo.push_back(n.b);
          break;
        }
        case Fk::Next:
          p.next.push_back(n.a);
          break;
        case Fk::Until: {
          if (contains(p.done, n.b)) break;
          Partial now = p;
          now.todo.push_back(n.b);
          run(std::move(now));
          p.todo.push_back(n.a);
          p.next.push_back(f);
          insert(p.postponed, f);
          break;
        }
        case Fk::Release: {
          if (contains(p.done, n.a)) {
            p.todo.push_back(n.b);
            break;
          }
          Partial now = p;
          now.todo.push_back(n.b);
          now.todo.push_back(n.a);
          run(std::move(now));
          p.todo.push_back(n.b);
          p.next.push_back(f);
          break;
        }
      }
    }
    Disjunct d;
    d.cube = p.cube;
    d.next = simplify(std::move(p.next));
    d.postponed = std::move(p.postponed);
    out_.push_back(std::move(d));
  }

  Pool& pool_;
  std::vector<Disjunct> out_;
};

struct TableauEdge {
  Cube cube;
  std::size_t target = 0;
  std::vector<int> postponed;
};

struct Tableau {
  std::vector<std::vector<TableauEdge>> edges;
  std::vector<int> acceptance_order;  // until ids, one acceptance set each
};

Tableau build_tableau(Pool& pool, int root) {
  Expander ex(pool);
  std::map<Obligations, std::size_t> ids;
  std::vector<Obligations> states;
  Tableau t;

  // Top-level conjuncts are separate obligations so that the initial state
  // coincides with the steady state of formulas like []<>a && []<>b.
  Obligations init;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    if (pool.at(f).kind == Fk::And) {
      stack.push_back(pool.at(f).a);
      stack.push_back(pool.at(f).b);
    } else {
      init.push_back(f);
    }
  }
  init = root == pool.fls() ? Obligations{root} : ex.simplify(std::move(init));
  ids.emplace(init, 0);
  states.push_back(init);

  std::vector<int> untils;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Obligations s = states[i];
    std::vector<TableauEdge> out;
    for (Disjunct& d : ex.expand(s)) {
      auto [it, inserted] = ids.emplace(d.next, states.size());
      if (inserted) states.push_back(d.next);
      for (int u : d.postponed) untils.push_back(u);
      out.push_back(TableauEdge{d.cube, it->second, std::move(d.postponed)});
    }
    t.edges.push_back(std::move(out));
  }
  std::sort(untils.begin(), untils.end());
  untils.erase(std::unique(untils.begin(), untils.end()), untils.end());
  // Outer obligations first: hash-consing gives enclosing formulas larger ids,
  // and checking them first keeps sequential chains short after degeneralization.
  t.acceptance_order.assign(untils.rbegin(), untils.rend());
  return t;
}

// ---------------------------------------------------------------------------
// Explicit automaton used during simplification

struct RawAutomaton {
  std::size_t n = 0;
  std::size_t initial = 0;
  std::vector<bool> accepting;
  std::vector<std::map<std::size_t, std::vector<Cube>>> out;  // src -> dst -> cubes
};

RawAutomaton degeneralize(const Tableau& t) {
  const std::size_t levels = t.acceptance_order.size();
  RawAutomaton a;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> states;
  auto id_of = [&](std::size_t ts, std::size_t level) {
    auto [it, inserted] = ids.emplace(std::make_pair(ts, level), states.size());
    if (inserted) states.emplace_back(ts, level);
    return it->second;
  };
  a.initial = id_of(0, levels);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto [ts, level] = states[i];
    std::map<std::size_t, std::vector<Cube>> out;
    for (const TableauEdge& e : t.edges[ts]) {
      std::size_t j = level == levels ? 0 : level;
      while (j < levels && !std::binary_search(e.postponed.begin(), e.postponed.end(),
                                               t.acceptance_order[j])) {
        ++j;
      }
      out[id_of(e.target, j)].push_back(e.cube);
    }
    for (auto& [dst, cubes] : out) cubes = minimize_cubes(std::move(cubes));
    a.out.push_back(std::move(out));
  }
  a.n = states.size();
  a.accepting.resize(a.n);
  for (std::size_t i = 0; i < a.n; ++i) a.accepting[i] = states[i].second == levels;
  return a;
}

/// Tarjan SCC ids; also reports which states lie on a cycle.
std::vector<std::size_t> scc_ids(const RawAutomaton& a, std::vector<bool>& on_cycle) {
  const std::size_t n = a.n;
  std::vector<std::size_t> comp(n, SIZE_MAX), low(n, 0), idx(n, SIZE_MAX);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  std::size_t comps = 0;
  std::vector<std::size_t> comp_size;

  // Iterative Tarjan to keep deep automata off the call stack.
  struct Frame {
    std::size_t v;
    std::map<std::size_t, std::vector<Cube>>::const_iterator it;
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (idx[s] != SIZE_MAX) continue;
    std::vector<Frame> frames;
    frames.push_back({s, a.out[s].begin()});
    idx[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.it != a.out[f.v].end()) {
        const std::size_t w = f.it->first;
        ++f.it;
        if (idx[w] == SIZE_MAX) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, a.out[w].begin()});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == idx[v]) {
        std::size_t size = 0;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
          ++size;
        } while (w != v);
        comp_size.push_back(size);
        ++comps;
      }
    }
  }
  on_cycle.assign(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    on_cycle[v] = comp_size[comp[v]] > 1 || a.out[v].count(v) > 0;
  }
  return comp;
}

/// Keeps only `keep` states (initial always kept) and renumbers them.
RawAutomaton restrict_to(const RawAutomaton& a, const std::vector<bool>& keep) {
  std::vector<std::size_t> remap(a.n, SIZE_MAX);
  RawAutomaton r;
  for (std::size_t v = 0; v < a.n; ++v) {
    if (keep[v] || v == a.initial) remap[v] = r.n++;
  }
  r.initial = remap[a.initial];
  r.accepting.assign(r.n, false);
  r.out.assign(r.n, {});
  for (std::size_t v = 0; v < a.n; ++v) {
    if (remap[v] == SIZE_MAX) continue;
    r.accepting[remap[v]] = a.accepting[v] && keep[v];
    if (!keep[v]) continue;
    for (const auto& [dst, cubes] : a.out[v]) {
      if (keep[dst]) r.out[remap[v]][remap[dst]] = cubes;
    }
  }
  return r;
}

RawAutomaton trim(const RawAutomaton& a) {
  std::vector<bool> on_cycle;
  const auto comp = scc_ids(a, on_cycle);

  // States on an accepting cycle seed the useful set.
  std::vector<bool> good_comp(a.n, false);
  for (std::size_t v = 0; v < a.n; ++v) {
    if (a.accepting[v] && on_cycle[v]) good_comp[comp[v]] = true;
  }
  std::vector<std::vector<std::size_t>> preds(a.n);
  for (std::size_t v = 0; v < a.n; ++v) {
    for (const auto& [dst, cubes] : a.out[v]) preds[dst].push_back(v);
  }
  std::vector<bool> useful(a.n, false);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < a.n; ++v) {
    if (good_comp[comp[v]] && on_cycle[v]) {
      useful[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t p : preds[v]) {
      if (!useful[p]) {
        useful[p] = true;
        queue.push_back(p);
      }
    }
  }

  // Reachable from the initial state through useful states.
  std::vector<bool> keep(a.n, false);
  if (useful[a.initial]) {
    keep[a.initial] = true;
    queue.push_back(a.initial);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (const auto& [dst, cubes] : a.out[v]) {
        if (useful[dst] && !keep[dst]) {
          keep[dst] = true;
          queue.push_back(dst);
        }
      }
    }
  }
  RawAutomaton r = restrict_to(a, keep);

  // Acceptance only matters on cycles.
  std::vector<bool> cyc;
  scc_ids(r, cyc);
  for (std::size_t v = 0; v < r.n; ++v) r.accepting[v] = r.accepting[v] && cyc[v];
  return r;
}

/// Merges states with identical acceptance and identical guarded successors
/// (partition refinement to the coarsest such partition).
RawAutomaton merge_equivalent(const RawAutomaton& a) {
  std::vector<std::size_t> cls(a.n);
  for (std::size_t v = 0; v < a.n; ++v) cls[v] = a.accepting[v] ? 1 : 0;
  std::size_t num_classes = 0;
  while (true) {
    using Signature = std::pair<std::size_t, std::vector<std::pair<std::size_t, std::vector<Cube>>>>;
    std::map<Signature, std::size_t> sig_ids;
    std::vector<std::size_t> next_cls(a.n);
    for (std::size_t v = 0; v < a.n; ++v) {
      std::map<std::size_t, std::vector<Cube>> by_class;
      for (const auto& [dst, cubes] : a.out[v]) {
        auto& acc = by_class[cls[dst]];
        acc.insert(acc.end(), cubes.begin(), cubes.end());
      }
      Signature sig{cls[v], {}};
      for (auto& [c, cubes] : by_class) sig.second.emplace_back(c, minimize_cubes(std::move(cubes)));
      auto [it, inserted] = sig_ids.emplace(std::move(sig), sig_ids.size());
      next_cls[v] = it->second;
    }
    const std::size_t count = sig_ids.size();
    cls = std::move(next_cls);
    if (count == num_classes) break;
    num_classes = count;
  }

  RawAutomaton r;
  r.n = num_classes;
  r.initial = cls[a.initial];
  r.accepting.assign(r.n, false);
  r.out.assign(r.n, {});
  std::vector<bool> filled(r.n, false);
  for (std::size_t v = 0; v < a.n; ++v) {
    const std::size_t c = cls[v];
    r.accepting[c] = a.accepting[v];
    if (filled[c]) continue;
    filled[c] = true;
    for (const auto& [dst, cubes] : a.out[v]) {
      auto& acc = r.out[c][cls[dst]];
      acc.insert(acc.end(), cubes.begin(), cubes.end());
    }
    for (auto& [dst, cubes] : r.out[c]) cubes = minimize_cubes(std::move(cubes));
  }
  return r;
}

Nba to_explicit(const RawAutomaton& a, const Alphabet& ap) {
  // Breadth-first renumbering from the initial state.
  std::vector<std::size_t> order;
  std::vector<std::size_t> remap(a.n, SIZE_MAX);
  remap[a.initial] = 0;
  order.push_back(a.initial);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& [dst, cubes] : a.out[order[i]]) {
      if (remap[dst] == SIZE_MAX) {
        remap[dst] = order.size();
        order.push_back(dst);
      }
    }
  }
  std::vector<StateId> accepting;
  std::vector<NbaEdge> edges;
  for (std::size_t v : order) {
    if (a.accepting[v]) accepting.push_back(static_cast<StateId>(remap[v]));
    for (const auto& [dst, cubes] : a.out[v]) {
      edges.push_back(NbaEdge{static_cast<StateId>(remap[v]), Guard::from_cubes(cubes),
                              static_cast<StateId>(remap[dst])});
    }
  }
  return Nba(ap, order.size(), {0}, std::move(accepting), std::move(edges));
}

}  // namespace

Nba to_nba(const LtlAst& formula, const Alphabet& ap, TranslationStats* stats) {
  if (!formula.well_formed()) throw std::invalid_argument("to_nba: malformed formula");
  Pool pool;
  const int root = to_nnf(pool, formula, ap, false);
  const Tableau tableau = build_tableau(pool, root);
  RawAutomaton raw = degeneralize(tableau);
  const std::size_t raw_states = raw.n;

  RawAutomaton a = trim(raw);
  // Merging can expose new redundancy; iterate to a fixpoint (bounded by size).
  for (std::size_t prev = SIZE_MAX; a.n != prev;) {
    prev = a.n;
    a = trim(merge_equivalent(a));
  }

  Nba nba = to_explicit(a, ap);
  if (stats) {
    stats->tableau_states = tableau.edges.size();
    stats->acceptance_sets = tableau.acceptance_order.size();
    stats->raw_states = raw_states;
    stats->final_states = nba.num_states();
  }
  return nba;
}

}  // namespace mvtl::ltl
