#include "mvtl/ltl/nba.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace mvtl::ltl {

Nba::Nba(Alphabet ap, std::size_t num_states, std::vector<StateId> initial,
         std::vector<StateId> accepting, std::vector<NbaEdge> edges)
    : ap_(std::move(ap)), num_states_(num_states) {
  if (num_states_ == 0) throw std::invalid_argument("automaton needs at least one state");
  const std::uint32_t allowed = ap_.all().bits();
  auto check_state = [&](StateId q) {
    if (q >= num_states_) throw std::invalid_argument("automaton state id out of range");
  };

  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
  if (initial.empty()) throw std::invalid_argument("automaton needs an initial state");
  for (StateId q : initial) check_state(q);
  initial_ = std::move(initial);

  accepting_flag_.assign(num_states_, false);
  for (StateId q : accepting) {
    check_state(q);
    accepting_flag_[q] = true;
  }
  for (StateId q = 0; q < num_states_; ++q) {
    if (accepting_flag_[q]) accepting_.push_back(q);
  }

  std::map<std::pair<StateId, StateId>, std::vector<Cube>> merged;
  std::map<std::pair<StateId, StateId>, Guard> single;
  for (NbaEdge& e : edges) {
    check_state(e.src);
    check_state(e.dst);
    if ((e.guard.atom_mask() & ~allowed) != 0) {
      throw std::invalid_argument("guard mentions an atom outside the alphabet");
    }
    if (!e.guard.satisfiable()) continue;
    auto key = std::make_pair(e.src, e.dst);
    auto& cubes = merged[key];
    if (cubes.empty()) single.emplace(key, e.guard);
    else single.erase(key);
    cubes.insert(cubes.end(), e.guard.cubes().begin(), e.guard.cubes().end());
  }

  for (auto& [key, cubes] : merged) {
    auto it = single.find(key);
    Guard g = it != single.end() ? it->second : Guard::from_cubes(std::move(cubes));
    edges_.push_back(NbaEdge{key.first, std::move(g), key.second});
  }

  out_.assign(num_states_, {});
  in_.assign(num_states_, {});
  lookup_.assign(num_states_ * num_states_, -1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out_[edges_[i].src].push_back(i);
    in_[edges_[i].dst].push_back(i);
    lookup_[edges_[i].src * num_states_ + edges_[i].dst] = static_cast<std::int32_t>(i);
  }
}

bool Nba::is_initial(StateId q) const {
  return std::binary_search(initial_.begin(), initial_.end(), q);
}

const NbaEdge* Nba::edge(StateId from, StateId to) const {
  if (from >= num_states_ || to >= num_states_) return nullptr;
  const std::int32_t i = lookup_[from * num_states_ + to];
  return i < 0 ? nullptr : &edges_[static_cast<std::size_t>(i)];
}

std::vector<StateId> Nba::successors(StateId q) const {
  std::vector<StateId> out;
  for (std::size_t i : out_.at(q)) out.push_back(edges_[i].dst);
  return out;
}

std::vector<StateId> Nba::predecessors(StateId q) const {
  std::vector<StateId> out;
  for (std::size_t i : in_.at(q)) out.push_back(edges_[i].src);
  return out;
}

nlohmann::json nba_to_json(const Nba& nba) {
  nlohmann::json edges = nlohmann::json::array();
  for (const NbaEdge& e : nba.edges()) {
    edges.push_back({{"src", e.src}, {"guard", e.guard.to_string(nba.alphabet())}, {"dst", e.dst}});
  }
  return {{"ap", nba.alphabet().names()},
          {"states", nba.num_states()},
          {"initial", nba.initial()},
          {"accepting", nba.accepting()},
          {"edges", edges}};
}

}  // namespace mvtl::ltl
