#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parity_forge/rational.hpp"

namespace pf {

// States are addressed by their index in ExplicitMdp::states. That index is the
// enumeration rank (written iota elsewhere): injective, stable, and the
// tie-breaking order for every deterministic choice in the library.
using StateIdx = int;

constexpr const char* kSinkWinId = "_sink_win";
constexpr const char* kSinkLoseId = "_sink_lose";

struct Edge {
  StateIdx to = -1;
  Rat p;  // meaningful iff the owning state is random
};

struct State {
  std::string id;
  bool controlled = false;
  int color = 0;
  std::vector<Edge> succ;
};

// Finite, fully materialized MDP with exact rational probabilities. Substrate
// for all exact computation.
struct ExplicitMdp {
  std::vector<State> states;
  std::vector<StateIdx> initial;

  StateIdx add_state(std::string id, bool controlled, int color);
  StateIdx find(const std::string& id) const;  // -1 when absent
  const State& at(StateIdx i) const { return states[static_cast<size_t>(i)]; }
  State& at(StateIdx i) { return states[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(states.size()); }

  bool is_absorbing(StateIdx i) const {
    const auto& ss = at(i).succ;
    return ss.size() == 1 && ss[0].to == i;
  }

 private:
  mutable std::map<std::string, StateIdx> index_;
  mutable size_t indexed_upto_ = 0;
  void reindex() const;
};

struct ColorInfo {
  std::set<int> palette;
  std::optional<int> e_max;  // largest even color, absent when no even color occurs

  static ColorInfo of(const ExplicitMdp& m);
  static ColorInfo of(const std::vector<int>& colors);
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Report-style: collects every violation of the well-formedness rules
// (dangling edges, distribution sums != 1, out-degree 0, duplicate successors,
// negative colors, malformed sink states).
ValidationReport validate(const ExplicitMdp& m);

// Forward-reachable set under all edges.
std::vector<StateIdx> reachable(const ExplicitMdp& m, const std::vector<StateIdx>& from);

// True when every cycle is a self-loop at an absorbing state. Finite stand-in
// for acyclicity: a genuinely acyclic system has no terminal states, while a
// finite one models the constant tail by an absorbing loop.
bool is_acyclic(const ExplicitMdp& m, std::string* counterexample = nullptr);

}  // namespace pf
