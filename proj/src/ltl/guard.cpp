#include "mvtl/ltl/guard.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "mvtl/ltl/parser.hpp"

namespace mvtl::ltl {

struct Guard::Node {
  Op op = Op::True;
  std::size_t atom = 0;
  std::vector<Guard> children;
  std::vector<Cube> cubes;
  std::uint32_t mask = 0;
};

std::vector<Cube> minimize_cubes(std::vector<Cube> cubes) {
  std::erase_if(cubes, [](const Cube& c) { return !c.consistent(); });
  // Weaker cubes first so every cube is only checked against kept ones.
  std::sort(cubes.begin(), cubes.end(), [](const Cube& a, const Cube& b) {
    if (a.literal_count() != b.literal_count()) return a.literal_count() < b.literal_count();
    return a < b;
  });
  std::vector<Cube> kept;
  for (const Cube& c : cubes) {
    const bool redundant =
        std::any_of(kept.begin(), kept.end(), [&](const Cube& k) { return c.implies(k); });
    if (!redundant) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

namespace {

std::vector<Cube> product(const std::vector<Cube>& a, const std::vector<Cube>& b) {
  std::vector<Cube> out;
  out.reserve(a.size() * b.size());
  for (const Cube& x : a) {
    for (const Cube& y : b) {
      Cube c{x.pos | y.pos, x.neg | y.neg};
      if (c.consistent()) out.push_back(c);
    }
  }
  return minimize_cubes(std::move(out));
}

std::vector<Cube> sum(const std::vector<Cube>& a, const std::vector<Cube>& b) {
  std::vector<Cube> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return minimize_cubes(std::move(out));
}

}  // namespace

Guard::Guard() : Guard(truth()) {}

Guard::Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Guard Guard::truth() {
  auto n = std::make_shared<Node>();
  n->op = Op::True;
  n->cubes = {Cube{}};
  return Guard(std::move(n));
}

Guard Guard::falsity() {
  auto n = std::make_shared<Node>();
  n->op = Op::False;
  return Guard(std::move(n));
}

Guard Guard::atom(std::size_t index) {
  if (index >= kMaxAtoms) throw std::out_of_range("guard atom index out of range");
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->atom = index;
  n->cubes = {Cube{1u << index, 0}};
  n->mask = 1u << index;
  return Guard(std::move(n));
}

Guard Guard::negate(Guard g) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->mask = g.atom_mask();
  // not (c1 or c2 ...) = and_i (not c_i), each (not c_i) a disjunction of literals.
  std::vector<Cube> acc = {Cube{}};
  for (const Cube& c : g.cubes()) {
    std::vector<Cube> negated;
    for (std::size_t i = 0; i < kMaxAtoms; ++i) {
      if ((c.pos >> i) & 1u) negated.push_back(Cube{0, 1u << i});
      if ((c.neg >> i) & 1u) negated.push_back(Cube{1u << i, 0});
    }
    acc = product(acc, negated);
    if (acc.empty()) break;
  }
  n->cubes = std::move(acc);
  n->children.push_back(std::move(g));
  return Guard(std::move(n));
}

Guard Guard::conj(Guard a, Guard b) {
  auto n = std::make_shared<Node>();
  n->op = Op::And;
  n->cubes = product(a.cubes(), b.cubes());
  n->mask = a.atom_mask() | b.atom_mask();
  n->children = {std::move(a), std::move(b)};
  return Guard(std::move(n));
}

Guard Guard::disj(Guard a, Guard b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  n->cubes = sum(a.cubes(), b.cubes());
  n->mask = a.atom_mask() | b.atom_mask();
  n->children = {std::move(a), std::move(b)};
  return Guard(std::move(n));
}

Guard Guard::literal(std::size_t index, bool positive) {
  return positive ? atom(index) : negate(atom(index));
}

Guard Guard::cube_term(const Cube& c) {
  Guard term = truth();
  bool started = false;
  for (std::size_t i = 0; i < kMaxAtoms; ++i) {
    const bool p = (c.pos >> i) & 1u;
    const bool q = (c.neg >> i) & 1u;
    if (!p && !q) continue;
    Guard lit = literal(i, p);
    term = started ? conj(std::move(term), std::move(lit)) : std::move(lit);
    started = true;
  }
  return term;
}

Guard Guard::balanced_or(const std::vector<Cube>& cubes, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return cube_term(cubes[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  Guard a = balanced_or(cubes, lo, mid);
  Guard b = balanced_or(cubes, mid, hi);
  // Any slice of a subsumption-free list is subsumption-free, so the DNF of
  // the union is the concatenation (re-sorted) without a quadratic pass.
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  n->cubes.assign(cubes.begin() + static_cast<std::ptrdiff_t>(lo),
                  cubes.begin() + static_cast<std::ptrdiff_t>(hi));
  std::sort(n->cubes.begin(), n->cubes.end());
  n->mask = a.atom_mask() | b.atom_mask();
  n->children = {std::move(a), std::move(b)};
  return Guard(std::move(n));
}

Guard Guard::from_cubes(std::vector<Cube> cubes) {
  cubes = minimize_cubes(std::move(cubes));
  if (cubes.empty()) return falsity();
  return balanced_or(cubes, 0, cubes.size());
}

Guard::Op Guard::op() const { return node_->op; }
std::size_t Guard::atom_index() const { return node_->atom; }
const std::vector<Guard>& Guard::children() const { return node_->children; }
const std::vector<Cube>& Guard::cubes() const { return node_->cubes; }
std::uint32_t Guard::atom_mask() const { return node_->mask; }

bool Guard::holds(Symbol s) const {
  switch (node_->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return s.contains(node_->atom);
    case Op::Not: return !node_->children[0].holds(s);
    case Op::And: return node_->children[0].holds(s) && node_->children[1].holds(s);
    case Op::Or: return node_->children[0].holds(s) || node_->children[1].holds(s);
  }
  return false;
}

namespace {

int precedence(Guard::Op op) {
  switch (op) {
    case Guard::Op::Or: return 1;
    case Guard::Op::And: return 2;
    default: return 3;
  }
}

std::string render(const Guard& g, const Alphabet& ap, int parent_prec) {
  std::string s;
  const int prec = precedence(g.op());
  switch (g.op()) {
    case Guard::Op::True: return "true";
    case Guard::Op::False: return "false";
    case Guard::Op::Atom:
      return g.atom_index() < ap.size() ? ap.name(g.atom_index())
                                        : "p" + std::to_string(g.atom_index());
    case Guard::Op::Not: return "!" + render(g.children()[0], ap, 3);
    case Guard::Op::And:
      s = render(g.children()[0], ap, prec) + " && " + render(g.children()[1], ap, prec);
      break;
    case Guard::Op::Or:
      s = render(g.children()[0], ap, prec) + " || " + render(g.children()[1], ap, prec);
      break;
  }
  return prec < parent_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string Guard::to_string(const Alphabet& ap) const { return render(*this, ap, 0); }

std::uint32_t violation_distance(Symbol sigma, const Guard& guard) {
  std::uint32_t best = kInfiniteViolation;
  for (const Cube& c : guard.cubes()) {
    best = std::min(best, c.distance(sigma));
    if (best == 0) break;
  }
  return best;
}

Guard guard_from_ast(const LtlAst& ast, const Alphabet& ap) {
  switch (ast.kind) {
    case Kind::True: return Guard::truth();
    case Kind::Atom: {
      auto i = ap.index_of(ast.atom);
      if (!i) throw std::invalid_argument("guard atom '" + ast.atom + "' not in AP");
      return Guard::atom(*i);
    }
    case Kind::Not: return Guard::negate(guard_from_ast(ast.children[0], ap));
    case Kind::And:
      return Guard::conj(guard_from_ast(ast.children[0], ap), guard_from_ast(ast.children[1], ap));
    case Kind::Or:
      return Guard::disj(guard_from_ast(ast.children[0], ap), guard_from_ast(ast.children[1], ap));
    case Kind::Implies:
      return Guard::disj(Guard::negate(guard_from_ast(ast.children[0], ap)),
                         guard_from_ast(ast.children[1], ap));
    default:
      throw std::invalid_argument(std::string("temporal operator ") + kind_name(ast.kind) +
                                  " not allowed in a guard");
  }
}

Guard parse_guard(std::string_view text, const Alphabet& ap) {
  return guard_from_ast(parse_ltl(text, ap), ap);
}

}  // namespace mvtl::ltl
