#include "parity_forge/mdp.hpp"

#include <algorithm>

#include "parity_forge/errors.hpp"

namespace pf {

StateIdx ExplicitMdp::add_state(std::string id, bool controlled, int color) {
  states.push_back(State{std::move(id), controlled, color, {}});
  return static_cast<StateIdx>(states.size()) - 1;
}

void ExplicitMdp::reindex() const {
  if (indexed_upto_ > states.size()) {
    index_.clear();
    indexed_upto_ = 0;
  }
  for (; indexed_upto_ < states.size(); ++indexed_upto_)
    index_.emplace(states[indexed_upto_].id, static_cast<StateIdx>(indexed_upto_));
}

StateIdx ExplicitMdp::find(const std::string& id) const {
  reindex();
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

ColorInfo ColorInfo::of(const std::vector<int>& colors) {
  ColorInfo ci;
  for (int c : colors) {
    ci.palette.insert(c);
    if (c % 2 == 0 && (!ci.e_max || c > *ci.e_max)) ci.e_max = c;
  }
  return ci;
}

ColorInfo ColorInfo::of(const ExplicitMdp& m) {
  std::vector<int> cs;
  cs.reserve(m.states.size());
  for (const auto& s : m.states) cs.push_back(s.color);
  return of(cs);
}

ValidationReport validate(const ExplicitMdp& m) {
  ValidationReport r;
  std::set<std::string> seen;
  for (int i = 0; i < m.size(); ++i) {
    const State& s = m.at(i);
    if (!seen.insert(s.id).second)
      r.issues.push_back("duplicate state id '" + s.id + "'");
    if (s.color < 0)
      r.issues.push_back("state '" + s.id + "' has negative color");
    if (s.succ.empty())
      r.issues.push_back("state '" + s.id + "' has no successor");
    std::set<StateIdx> targets;
    Rat sum;
    for (const Edge& e : s.succ) {
      if (e.to < 0 || e.to >= m.size()) {
        r.issues.push_back("dangling edge from '" + s.id + "'");
        continue;
      }
      if (!targets.insert(e.to).second)
        r.issues.push_back("duplicate successor '" + m.at(e.to).id + "' of '" + s.id + "'");
      if (!s.controlled) {
        if (e.p.sign() <= 0)
          r.issues.push_back("non-positive probability on edge '" + s.id + "' -> '" +
                             m.at(e.to).id + "'");
        sum += e.p;
      }
    }
    if (!s.controlled && sum != Rat(1))
      r.issues.push_back("distribution at '" + s.id + "' sums to " + sum.str());
    if ((s.id == kSinkWinId || s.id == kSinkLoseId) && !m.is_absorbing(i))
      r.issues.push_back("reserved sink id '" + s.id + "' on a non-absorbing state");
  }
  for (StateIdx i : m.initial)
    if (i < 0 || i >= m.size())
      r.issues.push_back("initial state index out of range");
  return r;
}

std::vector<StateIdx> reachable(const ExplicitMdp& m, const std::vector<StateIdx>& from) {
  std::vector<char> mark(m.states.size(), 0);
  std::vector<StateIdx> queue, out;
  for (StateIdx s : from)
    if (s >= 0 && s < m.size() && !mark[static_cast<size_t>(s)]) {
      mark[static_cast<size_t>(s)] = 1;
      queue.push_back(s);
    }
  for (size_t q = 0; q < queue.size(); ++q) {
    StateIdx s = queue[q];
    out.push_back(s);
    for (const Edge& e : m.at(s).succ)
      if (e.to >= 0 && e.to < m.size() && !mark[static_cast<size_t>(e.to)]) {
        mark[static_cast<size_t>(e.to)] = 1;
        queue.push_back(e.to);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_acyclic(const ExplicitMdp& m, std::string* counterexample) {
  // Iterative three-color DFS; absorbing self-loops are allowed.
  enum { kWhite, kGray, kBlack };
  std::vector<char> color(m.states.size(), kWhite);
  for (int root = 0; root < m.size(); ++root) {
    if (color[static_cast<size_t>(root)] != kWhite) continue;
    std::vector<std::pair<StateIdx, size_t>> stack{{root, 0}};
    color[static_cast<size_t>(root)] = kGray;
    while (!stack.empty()) {
      auto& [s, next] = stack.back();
      if (next < m.at(s).succ.size()) {
        StateIdx t = m.at(s).succ[next++].to;
        if (t == s && m.is_absorbing(s)) continue;
        if (t < 0 || t >= m.size()) continue;
        if (color[static_cast<size_t>(t)] == kGray) {
          if (counterexample)
            *counterexample = "cycle through '" + m.at(t).id + "'";
          return false;
        }
        if (color[static_cast<size_t>(t)] == kWhite) {
          color[static_cast<size_t>(t)] = kGray;
          stack.emplace_back(t, 0);
        }
      } else {
        color[static_cast<size_t>(s)] = kBlack;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace pf
