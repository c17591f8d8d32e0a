#include <algorithm>
#include <utility>

#include "parity_forge/analysis.hpp"

namespace pf {

std::vector<std::vector<StateIdx>> strongly_connected_components(const ExplicitMdp& m) {
  const int n = static_cast<int>(m.states.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<StateIdx> stk;
  std::vector<std::vector<StateIdx>> out;
  int counter = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<std::pair<int, size_t>> dfs;
    dfs.push_back({root, 0});
    while (!dfs.empty()) {
      const int v = dfs.back().first;
      const size_t ci = dfs.back().second;
      if (ci == 0) {
        index[v] = low[v] = counter++;
        stk.push_back(v);
        on_stack[v] = 1;
      }
      if (ci < m.states[v].succ.size()) {
        ++dfs.back().second;
        const int w = m.states[v].succ[ci].to;
        if (index[w] == -1)
          dfs.push_back({w, 0});
        else if (on_stack[w])
          low[v] = std::min(low[v], index[w]);
      } else {
        if (low[v] == index[v]) {
          std::vector<StateIdx> comp;
          while (true) {
            const int w = stk.back();
            stk.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          out.push_back(std::move(comp));
        }
        dfs.pop_back();
        if (!dfs.empty()) low[dfs.back().first] = std::min(low[dfs.back().first], low[v]);
      }
    }
  }
  return out;
}

std::vector<std::vector<StateIdx>> bottom_sccs(const ExplicitMdp& chain) {
  auto comps = strongly_connected_components(chain);
  std::vector<int> comp_of(chain.states.size(), -1);
  for (size_t i = 0; i < comps.size(); ++i)
    for (StateIdx s : comps[i]) comp_of[s] = static_cast<int>(i);
  std::vector<std::vector<StateIdx>> out;
  for (size_t i = 0; i < comps.size(); ++i) {
    bool bottom = true;
    for (StateIdx s : comps[i])
      for (const auto& e : chain.states[s].succ)
        if (comp_of[e.to] != static_cast<int>(i)) bottom = false;
    if (bottom) out.push_back(comps[i]);
  }
  return out;
}

std::vector<char> surely_safe_region(const ExplicitMdp& m, const std::vector<char>& bad) {
  const size_t n = m.states.size();
  std::vector<char> in(n, 1);
  for (size_t s = 0; s < n; ++s)
    if (bad[s]) in[s] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t s = 0; s < n; ++s) {
      if (!in[s]) continue;
      const auto& st = m.states[s];
      bool ok;
      if (st.controlled) {
        ok = false;
        for (const auto& e : st.succ)
          if (in[e.to]) ok = true;
      } else {
        ok = true;
        for (const auto& e : st.succ)
          if (!in[e.to]) ok = false;
      }
      if (!ok) {
        in[s] = 0;
        changed = true;
      }
    }
  }
  return in;
}

namespace {

// MECs of the sub-MDP restricted to `region`. Random states with mass leaving
// the region are pruned, controlled states keep only in-region edges.
std::vector<std::vector<StateIdx>> mecs_within(const ExplicitMdp& m,
                                               std::vector<StateIdx> region) {
  std::vector<std::vector<StateIdx>> result;
  std::vector<std::vector<StateIdx>> work;
  work.push_back(std::move(region));
  std::vector<char> in(m.states.size(), 0);
  while (!work.empty()) {
    std::vector<StateIdx> r = std::move(work.back());
    work.pop_back();
    for (StateIdx s : r) in[s] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<StateIdx> keep;
      keep.reserve(r.size());
      for (StateIdx s : r) {
        const auto& st = m.states[s];
        bool ok;
        if (st.controlled) {
          ok = false;
          for (const auto& e : st.succ)
            if (in[e.to]) ok = true;
        } else {
          ok = true;
          for (const auto& e : st.succ)
            if (!in[e.to]) ok = false;
        }
        if (ok)
          keep.push_back(s);
        else {
          in[s] = 0;
          changed = true;
        }
      }
      r = std::move(keep);
    }
    if (r.empty()) continue;

    // SCCs of the induced graph
    std::vector<StateIdx> order = r;
    std::vector<int> pos(m.states.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    // local Tarjan on the restriction
    const int ln = static_cast<int>(order.size());
    std::vector<int> index(ln, -1), low(ln, 0);
    std::vector<char> on_stack(ln, 0);
    std::vector<int> stk;
    std::vector<std::vector<StateIdx>> comps;
    int counter = 0;
    for (int lroot = 0; lroot < ln; ++lroot) {
      if (index[lroot] != -1) continue;
      std::vector<std::pair<int, size_t>> dfs;
      dfs.push_back({lroot, 0});
      while (!dfs.empty()) {
        const int lv = dfs.back().first;
        const size_t ci = dfs.back().second;
        const StateIdx v = order[lv];
        if (ci == 0) {
          index[lv] = low[lv] = counter++;
          stk.push_back(lv);
          on_stack[lv] = 1;
        }
        if (ci < m.states[v].succ.size()) {
          ++dfs.back().second;
          const StateIdx w = m.states[v].succ[ci].to;
          if (!in[w]) continue;
          const int lw = pos[w];
          if (index[lw] == -1)
            dfs.push_back({lw, 0});
          else if (on_stack[lw])
            low[lv] = std::min(low[lv], index[lw]);
        } else {
          if (low[lv] == index[lv]) {
            std::vector<StateIdx> comp;
            while (true) {
              const int lw = stk.back();
              stk.pop_back();
              on_stack[lw] = 0;
              comp.push_back(order[lw]);
              if (lw == lv) break;
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
          }
          dfs.pop_back();
          if (!dfs.empty())
            low[dfs.back().first] = std::min(low[dfs.back().first], low[lv]);
        }
      }
    }
    for (StateIdx s : r) in[s] = 0;

    if (comps.size() == 1 && comps[0].size() == r.size()) {
      // stable and strongly connected; singletons still need an internal edge
      bool has_edge = true;
      if (r.size() == 1) {
        has_edge = false;
        for (const auto& e : m.states[r[0]].succ)
          if (e.to == r[0]) has_edge = true;
      }
      if (has_edge) {
        result.push_back(std::move(comps[0]));
        continue;
      }
      continue;
    }
    // every component is strictly smaller here, so the loop terminates
    for (auto& c : comps) work.push_back(std::move(c));
  }
  return result;
}

// Largest even-max sub-EC inside `region`, or empty. Peels the odd max color
// and recurses into the surviving sub-ECs.
std::vector<StateIdx> even_core(const ExplicitMdp& m, const std::vector<StateIdx>& region) {
  for (const auto& mec : mecs_within(m, region)) {
    int cmax = 0;
    for (StateIdx s : mec) cmax = std::max(cmax, m.states[s].color);
    if (cmax % 2 == 0) return mec;
    std::vector<StateIdx> rest;
    for (StateIdx s : mec)
      if (m.states[s].color != cmax) rest.push_back(s);
    if (rest.empty()) continue;
    auto sub = even_core(m, rest);
    if (!sub.empty()) return sub;
  }
  return {};
}

}  // namespace

std::vector<std::vector<StateIdx>> max_end_components(const ExplicitMdp& m,
                                                      const std::vector<StateIdx>& region) {
  return mecs_within(m, region);
}

EcDecomposition mec_decomposition(const ExplicitMdp& m) {
  EcDecomposition out;
  out.mec_of.assign(m.states.size(), -1);
  std::vector<StateIdx> all(m.states.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<StateIdx>(i);
  for (auto& states : mecs_within(m, all)) {
    EcDecomposition::Mec mec;
    mec.states = std::move(states);
    for (StateIdx s : mec.states) mec.max_color = std::max(mec.max_color, m.states[s].color);
    mec.winning_core = even_core(m, mec.states);
    mec.winning = !mec.winning_core.empty();
    const int id = static_cast<int>(out.mecs.size());
    for (StateIdx s : mec.states) out.mec_of[s] = id;
    out.mecs.push_back(std::move(mec));
  }
  return out;
}

}  // namespace pf
