#pragma once

// Shared builders and oracles for the test suites. The brute-force evaluators
// here are deliberately independent of the MDP solvers: they enumerate MD
// strategies outright and only rely on the chain layer.

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <parity_forge/analysis.hpp>
#include <parity_forge/gallery.hpp>
#include <parity_forge/mdp.hpp>
#include <parity_forge/model.hpp>
#include <parity_forge/rng.hpp>
#include <parity_forge/strategy.hpp>

namespace pftest {

using namespace pf;

// Seeded MDP over the given palette. Cycles are allowed and common; every
// state gets between one and max_deg distinct successors.
inline ExplicitMdp random_mdp(uint64_t seed, int n, const std::vector<int>& palette,
                              int max_deg = 3) {
  if (n < 2) throw std::invalid_argument("random_mdp: n >= 2");
  Rng rng(seed);
  ExplicitMdp m;
  for (int i = 0; i < n; ++i)
    m.add_state("r" + std::to_string(i), false,
                palette[static_cast<size_t>(rng.below(palette.size()))]);
  m.initial.push_back(0);
  for (int i = 0; i < n; ++i) {
    auto& st = m.at(i);
    st.controlled = rng.below(2) == 0;
    const uint64_t deg =
        1 + rng.below(static_cast<uint64_t>(std::min(max_deg, n - 1)));
    std::set<StateIdx> picked;
    while (picked.size() < deg) {
      StateIdx t = static_cast<StateIdx>(rng.below(static_cast<uint64_t>(n)));
      if (t != i || deg == 1) picked.insert(t);  // self-loops only when absorbing
    }
    if (st.controlled) {
      for (StateIdx t : picked) st.succ.push_back(Edge{t, Rat(1)});
    } else {
      long total = 0;
      std::vector<long> units;
      for (size_t k = 0; k < picked.size(); ++k) {
        units.push_back(1 + static_cast<long>(rng.below(4)));
        total += units.back();
      }
      size_t k = 0;
      for (StateIdx t : picked) st.succ.push_back(Edge{t, Rat(units[k++], total)});
    }
  }
  return m;
}

// Seeded Markov chain (no controlled states) over the given palette.
inline ExplicitMdp random_chain(uint64_t seed, int n, const std::vector<int>& palette,
                                int max_deg = 3) {
  ExplicitMdp m = random_mdp(seed, n, palette, max_deg);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  for (auto& st : m.states) {
    if (!st.controlled) continue;
    st.controlled = false;
    long total = 0;
    std::vector<long> units;
    for (size_t k = 0; k < st.succ.size(); ++k) {
      units.push_back(1 + static_cast<long>(rng.below(4)));
      total += units.back();
    }
    for (size_t k = 0; k < st.succ.size(); ++k) st.succ[k].p = Rat(units[k], total);
  }
  return m;
}

// Seeded DAG where every state is reachable from d0: a forward spine
// d0 -> d1 -> ... plus random forward edges, ending in absorbing goal/trap
// leaves. Only self-loops at the leaves, so is_acyclic holds.
inline ExplicitMdp random_dag(uint64_t seed, int n, int max_deg = 3) {
  if (n < 3) throw std::invalid_argument("random_dag: n >= 3");
  Rng rng(seed);
  ExplicitMdp m;
  const int inner = n - 2;
  for (int i = 0; i < inner; ++i) m.add_state("d" + std::to_string(i), false, 0);
  const StateIdx goal = m.add_state("goal", false, 0);
  const StateIdx trap = m.add_state("trap", false, 1);
  m.at(goal).succ = {{goal, Rat(1)}};
  m.at(trap).succ = {{trap, Rat(1)}};
  m.initial.push_back(0);
  for (int i = 0; i < inner; ++i) {
    auto& st = m.at(i);
    st.controlled = rng.below(2) == 0;
    std::set<StateIdx> picked;
    picked.insert(i + 1 < inner ? i + 1 : goal);  // the spine
    const uint64_t extra = rng.below(static_cast<uint64_t>(max_deg));
    for (uint64_t k = 0; k < extra; ++k) {
      const uint64_t span = static_cast<uint64_t>(inner - i - 1) + 2;
      const uint64_t off = rng.below(span);
      StateIdx t;
      if (off < static_cast<uint64_t>(inner - i - 1))
        t = i + 1 + static_cast<StateIdx>(off);
      else
        t = off == span - 2 ? goal : trap;
      picked.insert(t);
    }
    if (st.controlled) {
      for (StateIdx t : picked) st.succ.push_back(Edge{t, Rat(1)});
    } else {
      long total = 0;
      std::vector<long> units;
      for (size_t k = 0; k < picked.size(); ++k) {
        units.push_back(1 + static_cast<long>(rng.below(4)));
        total += units.back();
      }
      size_t k = 0;
      for (StateIdx t : picked) st.succ.push_back(Edge{t, Rat(units[k++], total)});
    }
  }
  return m;
}

// Full materialization of a finite gallery family.
inline ExplicitMdp build_family(const std::string& family, const ojson& params = ojson::object()) {
  const auto model = gallery_build(FamilySpec{family, params});
  auto mat = materialize(model, 1u << 12, 1u << 12);
  if (!mat.frontier.clean())
    throw std::runtime_error("build_family: '" + family + "' did not materialize to completion");
  return std::move(mat.mdp);
}

// Number of MD strategies (product of controlled out-degrees).
inline uint64_t md_count(const ExplicitMdp& m, uint64_t cap = 1u << 22) {
  uint64_t total = 1;
  for (const auto& st : m.states) {
    if (!st.controlled) continue;
    total *= st.succ.size();
    if (total > cap) throw std::runtime_error("md_count: strategy space above the cap");
  }
  return total;
}

// Per-state optimum over every MD strategy, by exhaustive enumeration over
// the deterministic chains. Positional optima exist for all three objectives,
// so this elementwise maximum is the true value vector.
inline std::vector<Rat> brute_force_values(const ExplicitMdp& m, const Objective& obj,
                                           uint64_t cap = 1u << 18) {
  std::vector<StateIdx> ctrl;
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).controlled) ctrl.push_back(s);
  uint64_t total = 1;
  for (StateIdx s : ctrl) {
    total *= m.at(s).succ.size();
    if (total > cap) throw std::runtime_error("brute_force_values: space above the cap");
  }

  std::vector<Rat> best(m.states.size(), Rat(0));
  std::vector<size_t> digit(ctrl.size(), 0);
  for (uint64_t it = 0; it < total; ++it) {
    ExplicitMdp chain = m;
    for (size_t k = 0; k < ctrl.size(); ++k) {
      auto& st = chain.at(ctrl[k]);
      const Edge pick = st.succ[digit[k]];
      st.succ = {Edge{pick.to, Rat(1)}};
    }
    for (auto& st : chain.states) st.controlled = false;
    const auto v = chain_values(chain, obj);
    for (size_t s = 0; s < v.size(); ++s)
      if (v[s] > best[s]) best[s] = v[s];
    for (size_t k = 0; k < ctrl.size(); ++k) {
      if (++digit[k] < m.at(ctrl[k]).succ.size()) break;
      digit[k] = 0;
    }
  }
  return best;
}

// Attainment of a deterministic strategy from its initial mode, one entry per
// source state. Written against the induced-chain API only.
inline std::vector<Rat> eval_strategy(const ExplicitMdp& m, const Strategy& sigma,
                                      const Objective& obj) {
  std::vector<StateIdx> from(m.states.size());
  for (StateIdx s = 0; s < m.size(); ++s) from[static_cast<size_t>(s)] = s;
  const auto ic = induce_chain(m, sigma, from);
  const auto cv = chain_values(ic, obj);
  std::vector<Rat> out(m.states.size());
  for (StateIdx s = 0; s < m.size(); ++s)
    out[static_cast<size_t>(s)] = cv[static_cast<size_t>(ic.product(sigma.m0, s))];
  return out;
}

inline std::vector<StateIdx> all_of(const ExplicitMdp& m) {
  std::vector<StateIdx> out(m.states.size());
  for (StateIdx s = 0; s < m.size(); ++s) out[static_cast<size_t>(s)] = s;
  return out;
}

inline std::vector<StateIdx> states_of_color(const ExplicitMdp& m, int color) {
  std::vector<StateIdx> out;
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).color == color) out.push_back(s);
  return out;
}

}  // namespace pftest
