#include "mvtl/ltl/ast.hpp"

#include <algorithm>
#include <utility>

namespace mvtl::ltl {

std::size_t arity(Kind kind) {
  switch (kind) {
    case Kind::True:
    case Kind::Atom:
      return 0;
    case Kind::Not:
    case Kind::Next:
    case Kind::Eventually:
    case Kind::Always:
      return 1;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Until:
      return 2;
  }
  return 0;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::True: return "True";
    case Kind::Atom: return "Atom";
    case Kind::Not: return "Not";
    case Kind::And: return "And";
    case Kind::Or: return "Or";
    case Kind::Implies: return "Implies";
    case Kind::Next: return "Next";
    case Kind::Until: return "Until";
    case Kind::Eventually: return "Eventually";
    case Kind::Always: return "Always";
  }
  return "?";
}

LtlAst LtlAst::truth() { return LtlAst{}; }

LtlAst LtlAst::make_atom(std::string name) {
  LtlAst f;
  f.kind = Kind::Atom;
  f.atom = std::move(name);
  return f;
}

LtlAst LtlAst::unary(Kind kind, LtlAst operand) {
  LtlAst f;
  f.kind = kind;
  f.children.push_back(std::move(operand));
  return f;
}

LtlAst LtlAst::binary(Kind kind, LtlAst lhs, LtlAst rhs) {
  LtlAst f;
  f.kind = kind;
  f.children.reserve(2);
  f.children.push_back(std::move(lhs));
  f.children.push_back(std::move(rhs));
  return f;
}

bool LtlAst::well_formed() const {
  if (children.size() != arity(kind)) return false;
  if ((kind == Kind::Atom) == atom.empty()) return false;
  return std::all_of(children.begin(), children.end(),
                     [](const LtlAst& c) { return c.well_formed(); });
}

std::string LtlAst::to_string() const {
  switch (kind) {
    case Kind::True: return "true";
    case Kind::Atom: return atom;
    case Kind::Not: return "!" + children[0].to_string();
    case Kind::Next: return "X " + children[0].to_string();
    case Kind::Eventually: return "<>" + children[0].to_string();
    case Kind::Always: return "[]" + children[0].to_string();
    case Kind::And:
      return "(" + children[0].to_string() + " && " + children[1].to_string() + ")";
    case Kind::Or:
      return "(" + children[0].to_string() + " || " + children[1].to_string() + ")";
    case Kind::Implies:
      return "(" + children[0].to_string() + " -> " + children[1].to_string() + ")";
    case Kind::Until:
      return "(" + children[0].to_string() + " U " + children[1].to_string() + ")";
  }
  return "?";
}

LtlAst atom(std::string name) { return LtlAst::make_atom(std::move(name)); }
LtlAst not_(LtlAst f) { return LtlAst::unary(Kind::Not, std::move(f)); }
LtlAst and_(LtlAst a, LtlAst b) { return LtlAst::binary(Kind::And, std::move(a), std::move(b)); }
LtlAst or_(LtlAst a, LtlAst b) { return LtlAst::binary(Kind::Or, std::move(a), std::move(b)); }
LtlAst implies(LtlAst a, LtlAst b) {
  return LtlAst::binary(Kind::Implies, std::move(a), std::move(b));
}
LtlAst next(LtlAst f) { return LtlAst::unary(Kind::Next, std::move(f)); }
LtlAst until(LtlAst a, LtlAst b) { return LtlAst::binary(Kind::Until, std::move(a), std::move(b)); }
LtlAst eventually(LtlAst f) { return LtlAst::unary(Kind::Eventually, std::move(f)); }
LtlAst always(LtlAst f) { return LtlAst::unary(Kind::Always, std::move(f)); }

namespace {
void collect_atoms(const LtlAst& f, std::vector<std::string>& out) {
  if (f.kind == Kind::Atom) {
    if (std::find(out.begin(), out.end(), f.atom) == out.end()) out.push_back(f.atom);
    return;
  }
  for (const auto& c : f.children) collect_atoms(c, out);
}
}  // namespace

std::vector<std::string> atoms_of(const LtlAst& f) {
  std::vector<std::string> out;
  collect_atoms(f, out);
  return out;
}

}  // namespace mvtl::ltl
