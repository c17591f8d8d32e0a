#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parity_forge/analysis.hpp"
#include "parity_forge/mdp.hpp"
#include "parity_forge/model.hpp"
#include "parity_forge/strategy.hpp"

namespace pf {

// Two-layer expansion: one copy of every state and of every transition per
// bit value. Transition copies are controlled so a strategy can flip the bit
// after seeing how a random state resolved.
struct LayeredMdp {
  ExplicitMdp mdp;
  ExplicitMdp source;
  std::vector<StateIdx> sibling;                     // same object, other bit
  std::vector<int> bit;                              // 0 or 1
  std::vector<StateIdx> source_state;                // state copies; -1 for transition copies
  std::vector<std::pair<StateIdx, int>> source_edge; // transition copies; {-1,-1} otherwise

  StateIdx state_copy(StateIdx src, int b) const;
  StateIdx transition_copy(StateIdx src, int edge_index, int b) const;

 private:
  friend LayeredMdp layer(const ExplicitMdp&);
  std::vector<int> edge_base_;  // rank of each source state's first transition
};

LayeredMdp layer(const ExplicitMdp& m);

// Minimal sibling-closed superset, sorted.
std::vector<StateIdx> closure(const LayeredMdp& l, std::vector<StateIdx> b);

// MD strategy on the layered MDP -> 1-bit strategy on the source. Strategy
// rows are produced only where the MD strategy has both of its per-step rows;
// gaps surface later as UndefinedChoice if they are ever reachable.
Strategy unlayer_strategy(const LayeredMdp& l, const Strategy& tau);

// 1-bit strategy on the source -> MD strategy on the layered MDP. Missing
// random bit-updates follow the keep-the-bit default.
Strategy layer_strategy(const LayeredMdp& l, const Strategy& u);

// Step-counter expansion with states "<id>@<n>". The result is acyclic; a
// k-bit strategy on it is the same thing as a k-bit Markov strategy on the
// source.
MdpModel acyclify(const MdpModel& m);

Strategy strategy_from_acyclic(const Strategy& sigma);  // "<id>@<n>" rows -> step-tagged rows
Strategy strategy_to_acyclic(const Strategy& sigma);    // inverse direction

// Ladder gadgets for wide states: states whose branching exceeds branch_cap
// are replaced by a descending chain of binary rungs "<id>#rung<i>"; all
// original colors shift by +2 and rungs get color 1, so descending forever
// loses. Rung exit probabilities are renormalized so that exit i carries
// exactly the original mass of successor i.
struct Ladderized {
  MdpModel model;
  MdpModel source;
  uint64_t branch_cap = 0;

  // 1-bit strategy on the ladder -> 1-bit strategy on the source, composing
  // the bit updates along the rung path each choice walks through.
  Strategy pull_back(const Strategy& sigma) const;
};

Ladderized ladderize(const MdpModel& m, uint64_t branch_cap);

// Conditioning on a parity objective: keep value-positive states, keep
// controlled edges only between equal-value states, reweight random edges by
// the value ratio. Rows sum to 1 again by the value martingale.
ExplicitMdp condition(const ExplicitMdp& m, const Objective& obj);

struct Bubble {
  std::vector<std::string> center;
  uint64_t radius = 0;
  std::vector<std::string> members;  // sorted
  bool contains(const std::string& id) const;
};

Bubble bubble(const ExplicitMdp& m, const std::vector<StateIdx>& center, uint64_t radius);
Bubble bubble(const MdpModel& m, const std::vector<std::string>& center, uint64_t radius);

enum class TruncMode { pessimistic, optimistic };

// Certified finite window: BFS up to `radius` from S0, with every cut edge
// and unenumerated tail redirected to an absorbing sink that either loses
// (pessimistic, odd color above the palette) or wins (optimistic, even color
// above the palette). Values on the window bracket the true values.
ExplicitMdp truncate(const MdpModel& m, const std::vector<std::string>& s0, uint64_t radius,
                     uint64_t branch_cap, TruncMode mode);

}  // namespace pf
