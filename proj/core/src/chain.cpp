#include <algorithm>

#include "parity_forge/analysis.hpp"

namespace pf {

namespace {

void require_chain(const ExplicitMdp& c) {
  for (const auto& s : c.states)
    if (s.controlled)
      throw PreconditionError("NotAChain",
                              "chain analysis requires a Markov chain, found controlled state '" +
                                  s.id + "'");
}

}  // namespace

std::vector<Rat> chain_reach(const ExplicitMdp& c, const std::vector<char>& target) {
  require_chain(c);
  const size_t n = c.states.size();
  if (target.size() != n) throw InputError("chain_reach: flag vector size mismatch");

  // states that can reach the target at all
  std::vector<std::vector<StateIdx>> rev(n);
  for (size_t s = 0; s < n; ++s)
    for (const auto& e : c.states[s].succ) rev[e.to].push_back(static_cast<StateIdx>(s));
  std::vector<char> can(n, 0);
  std::vector<StateIdx> queue;
  for (size_t s = 0; s < n; ++s)
    if (target[s]) {
      can[s] = 1;
      queue.push_back(static_cast<StateIdx>(s));
    }
  while (!queue.empty()) {
    const StateIdx t = queue.back();
    queue.pop_back();
    for (StateIdx s : rev[t])
      if (!can[s]) {
        can[s] = 1;
        queue.push_back(s);
      }
  }

  std::vector<int> row(n, -1);
  std::vector<StateIdx> unknown;
  for (size_t s = 0; s < n; ++s)
    if (can[s] && !target[s]) {
      row[s] = static_cast<int>(unknown.size());
      unknown.push_back(static_cast<StateIdx>(s));
    }

  std::vector<Rat> values(n, Rat(0));
  for (size_t s = 0; s < n; ++s)
    if (target[s]) values[s] = Rat(1);
  if (!unknown.empty()) {
    const size_t k = unknown.size();
    std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k, Rat(0)));
    std::vector<Rat> b(k, Rat(0));
    for (size_t i = 0; i < k; ++i) {
      a[i][i] = Rat(1);
      for (const auto& e : c.states[unknown[i]].succ) {
        if (target[e.to])
          b[i] = b[i] + e.p;
        else if (row[e.to] >= 0)
          a[i][row[e.to]] = a[i][row[e.to]] - e.p;
        // mass into cannot-reach states contributes zero
      }
    }
    const auto x = solve_linear(std::move(a), std::move(b));
    for (size_t i = 0; i < k; ++i) values[unknown[i]] = x[i];
  }
  return values;
}

std::vector<Rat> chain_stay(const ExplicitMdp& c, const std::vector<char>& good) {
  std::vector<char> bad(good.size());
  for (size_t i = 0; i < good.size(); ++i) bad[i] = good[i] ? 0 : 1;
  auto escape = chain_reach(c, bad);
  for (auto& v : escape) v = Rat(1) - v;
  return escape;
}

std::vector<Rat> chain_settle(const ExplicitMdp& c, const std::vector<char>& good) {
  require_chain(c);
  if (good.size() != c.states.size()) throw InputError("chain_settle: flag vector size mismatch");
  std::vector<char> target(c.states.size(), 0);
  for (const auto& bscc : bottom_sccs(c)) {
    bool inside = true;
    for (StateIdx s : bscc)
      if (!good[s]) inside = false;
    if (inside)
      for (StateIdx s : bscc) target[s] = 1;
  }
  return chain_reach(c, target);
}

std::vector<Rat> chain_parity(const ExplicitMdp& c) {
  require_chain(c);
  std::vector<char> target(c.states.size(), 0);
  for (const auto& bscc : bottom_sccs(c)) {
    int cmax = 0;
    for (StateIdx s : bscc) cmax = std::max(cmax, c.states[s].color);
    if (cmax % 2 == 0)
      for (StateIdx s : bscc) target[s] = 1;
  }
  return chain_reach(c, target);
}

std::vector<Rat> chain_values(const ExplicitMdp& c, const Objective& obj) {
  std::vector<char> flags(c.states.size(), 0);
  switch (obj.kind) {
    case Objective::Kind::parity:
      return chain_parity(c);
    case Objective::Kind::reach:
      for (StateIdx s : obj.target) flags.at(s) = 1;
      return chain_reach(c, flags);
    case Objective::Kind::safety: {
      for (StateIdx s : obj.target) flags.at(s) = 1;
      std::vector<char> good(c.states.size());
      for (size_t i = 0; i < good.size(); ++i) good[i] = flags[i] ? 0 : 1;
      return chain_stay(c, good);
    }
  }
  throw Error("chain_values: unknown objective");
}

std::vector<Rat> chain_values(const InducedChain& ic, const Objective& obj) {
  if (obj.kind == Objective::Kind::parity) return chain_parity(ic.chain);
  std::vector<char> src(0);
  StateIdx max_src = 0;
  for (const auto& o : ic.origin) max_src = std::max(max_src, o.second);
  src.assign(static_cast<size_t>(max_src) + 1, 0);
  for (StateIdx s : obj.target)
    if (s >= 0 && s <= max_src) src[s] = 1;
  std::vector<char> flags(ic.chain.states.size(), 0);
  for (size_t i = 0; i < flags.size(); ++i) flags[i] = src[ic.origin[i].second];
  if (obj.kind == Objective::Kind::reach) return chain_reach(ic.chain, flags);
  std::vector<char> good(flags.size());
  for (size_t i = 0; i < good.size(); ++i) good[i] = flags[i] ? 0 : 1;
  return chain_stay(ic.chain, good);
}

}  // namespace pf
