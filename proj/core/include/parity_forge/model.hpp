#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parity_forge/mdp.hpp"

namespace pf {

struct SuccEntry {
  std::string id;
  Rat p;  // ignored for controlled states
};

// Possibly infinite MDP presented by pure query functions. Successors are
// enumerated by index; enumeration order is part of the model's identity
// (materialization depends on it deterministically). Random states that
// branch infinitely must expose a computable tail mass: without it no
// certified truncation bound exists.
struct MdpModel {
  std::vector<std::string> initial;
  std::function<bool(const std::string&)> controlled;
  std::function<int(const std::string&)> color;
  // i-th successor of a state, nullopt once the enumeration ends
  std::function<std::optional<SuccEntry>(const std::string&, uint64_t)> succ_at;
  // probability mass of a random state's distribution beyond the first k
  // entries; nullopt when the model cannot compute it
  std::function<std::optional<Rat>(const std::string&, uint64_t)> tail_mass_after;
  std::vector<int> palette;  // declared color set
  bool declared_acyclic = false;
  bool declared_finitely_branching = false;
};

// Wrap a finite MDP as a lazy model (successor order preserved).
MdpModel as_model(std::shared_ptr<const ExplicitMdp> m);
inline MdpModel as_model(ExplicitMdp m) {
  return as_model(std::make_shared<const ExplicitMdp>(std::move(m)));
}

struct FrontierInfo {
  struct Cut {
    std::string from;
    std::string to;  // empty for an unenumerated random tail
    Rat mass;        // 0 for controlled cuts
    bool controlled = false;
  };
  std::vector<Cut> cut_edges;
  std::map<std::string, Rat> residual;      // per random state: unenumerated mass
  std::vector<std::string> truncated_controlled;  // branch-capped controlled states
  std::vector<std::string> frontier;        // states at distance == horizon
  bool clean() const {
    return cut_edges.empty() && residual.empty() && truncated_controlled.empty();
  }
};

struct Materialized {
  ExplicitMdp mdp;
  FrontierInfo frontier;
};

// Breadth-first expansion from the initial states up to `horizon` steps.
// States at distance <= horizon are kept; edges are kept iff both endpoints
// are kept and the successor enumeration did not get cut. Models that declare
// finite branching are enumerated to completion (a hard guard trips
// otherwise); all other states are cut at branch_cap, recording the residual
// tail mass (random) or a truncation flag (controlled). The result generally
// fails validate() at the frontier until completed by a sink policy.
Materialized materialize(const MdpModel& m, uint64_t horizon, uint64_t branch_cap);

constexpr uint64_t kEnumGuard = 1u << 20;

}  // namespace pf
