#include <algorithm>

#include "parity_forge/analysis.hpp"

namespace pf {

namespace {

std::string head_list(const std::vector<std::string>& items, size_t cap = 4) {
  std::string out;
  for (size_t i = 0; i < items.size() && i < cap; ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  if (items.size() > cap) out += ", ... (" + std::to_string(items.size()) + " total)";
  return out;
}

}  // namespace

CheckReport check_levy(const ExplicitMdp& chain, const LevyParams& params) {
  for (const auto& s : chain.states)
    if (s.controlled) throw Error("check_levy expects a Markov chain, found controlled state '" + s.id + "'");
  const size_t n = chain.states.size();
  const auto v = chain_parity(chain);

  CheckReport rep;
  rep.suite = "levy";

  auto safe_flags = [&](const Rat& beta) {
    std::vector<char> f(n, 0);
    for (size_t s = 0; s < n; ++s) f[s] = v[s] >= beta ? 1 : 0;
    return f;
  };

  // (a) from Safe(b2), staying in Safe(b1) has probability >= (b2-b1)/(1-b1)
  for (const auto& [b1, b2] : params.beta_pairs) {
    if (!(Rat(0) < b1 && b1 < b2 && b2 <= Rat(1)))
      throw Error("check_levy: beta pair must satisfy 0 < b1 < b2 <= 1");
    const Rat bound = (b2 - b1) / (Rat(1) - b1);
    const auto stay = chain_stay(chain, safe_flags(b1));
    std::vector<std::string> bad;
    for (size_t s = 0; s < n; ++s)
      if (v[s] >= b2 && stay[s] < bound)
        bad.push_back(chain.states[s].id + ": " + stay[s].str() + " < " + bound.str());
    CheckItem item;
    item.name = "stay-bound b1=" + b1.str() + " b2=" + b2.str();
    item.pass = bad.empty();
    item.details = bad.empty() ? "bound " + bound.str() + " holds at all " + std::to_string(n) + " states"
                               : head_list(bad);
    rep.items.push_back(std::move(item));
  }

  // (b) settling in Safe(b) and winning the parity objective differ by a null set
  const auto bsccs = bottom_sccs(chain);
  for (const Rat& beta : params.betas) {
    if (!(Rat(0) < beta && beta <= Rat(1)))
      throw Error("check_levy: beta must satisfy 0 < beta <= 1");
    const auto safe = safe_flags(beta);
    std::vector<char> settle_not_win(n, 0), win_not_settle(n, 0);
    for (const auto& b : bsccs) {
      int cmax = 0;
      bool inside = true;
      for (StateIdx s : b) {
        cmax = std::max(cmax, chain.states[s].color);
        if (!safe[s]) inside = false;
      }
      const bool win = cmax % 2 == 0;
      if (inside && !win)
        for (StateIdx s : b) settle_not_win[s] = 1;
      if (win && !inside)
        for (StateIdx s : b) win_not_settle[s] = 1;
    }
    const auto p1 = chain_reach(chain, settle_not_win);
    const auto p2 = chain_reach(chain, win_not_settle);
    std::vector<std::string> bad;
    for (size_t s = 0; s < n; ++s) {
      if (!p1[s].is_zero()) bad.push_back(chain.states[s].id + ": FG-safe minus win = " + p1[s].str());
      if (!p2[s].is_zero()) bad.push_back(chain.states[s].id + ": win minus FG-safe = " + p2[s].str());
    }
    CheckItem item;
    item.name = "settle-equivalence b=" + beta.str();
    item.pass = bad.empty();
    item.details = bad.empty() ? "both difference events have probability 0" : head_list(bad);
    rep.items.push_back(std::move(item));
  }

  // (c) h_r(s) = P_s(win and visit F within r steps), F = Safe(1-eps);
  // sweep r upward until the loss drops below eps'
  const auto f_flags = safe_flags(Rat(1) - params.eps);
  std::vector<std::vector<Rat>> h;
  h.reserve(params.n_cap + 1);
  {
    std::vector<Rat> h0(n, Rat(0));
    for (size_t s = 0; s < n; ++s)
      if (f_flags[s]) h0[s] = v[s];
    h.push_back(std::move(h0));
  }
  std::vector<uint64_t> found(n, params.n_cap + 1);
  uint64_t n_star = 0;
  {
    std::vector<std::string> bad;
    size_t remaining = n;
    for (uint64_t r = 0; r <= params.n_cap && remaining > 0; ++r) {
      if (r == h.size()) {
        const auto& prev = h.back();
        std::vector<Rat> cur(n, Rat(0));
        for (size_t s = 0; s < n; ++s) {
          if (f_flags[s]) {
            cur[s] = v[s];
            continue;
          }
          Rat sum(0);
          for (const auto& e : chain.states[s].succ) sum = sum + e.p * prev[e.to];
          cur[s] = sum;
        }
        h.push_back(std::move(cur));
      }
      for (size_t s = 0; s < n; ++s) {
        if (found[s] <= params.n_cap) continue;
        if (h[r][s] >= v[s] - params.eps_prime) {
          found[s] = r;
          n_star = std::max(n_star, r);
          --remaining;
        }
      }
    }
    for (size_t s = 0; s < n; ++s)
      if (found[s] > params.n_cap)
        bad.push_back(chain.states[s].id + ": no horizon up to " + std::to_string(params.n_cap) + " suffices");
    CheckItem item;
    item.name = "bounded-visit horizon eps=" + params.eps.str() + " eps'=" + params.eps_prime.str();
    item.pass = bad.empty();
    item.details = bad.empty() ? "largest horizon needed: " + std::to_string(n_star) : head_list(bad);
    rep.items.push_back(std::move(item));
    if (!bad.empty()) n_star = params.n_cap;
  }
  while (h.size() <= n_star) {
    const auto& prev = h.back();
    std::vector<Rat> cur(n, Rat(0));
    for (size_t s = 0; s < n; ++s) {
      if (f_flags[s]) {
        cur[s] = v[s];
        continue;
      }
      Rat sum(0);
      for (const auto& e : chain.states[s].succ) sum = sum + e.p * prev[e.to];
      cur[s] = sum;
    }
    h.push_back(std::move(cur));
  }

  // (d) the truncated event E' from (c) loses at most eps' against E on every
  // short cylinder
  {
    std::vector<StateIdx> roots = chain.initial;
    if (roots.empty())
      for (size_t s = 0; s < n; ++s) roots.push_back(static_cast<StateIdx>(s));
    std::vector<std::string> bad;
    size_t checked = 0;
    bool truncated = false;
    struct Node {
      StateIdx s;
      uint64_t len;
      Rat prob;
      bool hit;
    };
    for (StateIdx root : roots) {
      std::vector<Node> stack;
      stack.push_back({root, 0, Rat(1), f_flags[root] != 0});
      while (!stack.empty()) {
        Node cur = stack.back();
        stack.pop_back();
        if (checked >= params.cyl_guard) {
          truncated = true;
          break;
        }
        ++checked;
        const Rat p_e = cur.prob * v[cur.s];
        Rat p_ep;
        if (cur.hit)
          p_ep = p_e;
        else
          p_ep = cur.prob * h[static_cast<size_t>(n_star - cur.len)][cur.s];
        if (p_ep < p_e - params.eps_prime)
          bad.push_back(chain.states[cur.s].id + " at depth " + std::to_string(cur.len) + ": " +
                        p_ep.str() + " < " + (p_e - params.eps_prime).str());
        if (cur.len < static_cast<uint64_t>(params.cyl_len) && cur.len < n_star)
          for (const auto& e : chain.states[cur.s].succ)
            stack.push_back({e.to, cur.len + 1, cur.prob * e.p,
                             cur.hit || f_flags[e.to] != 0});
      }
    }
    CheckItem item;
    item.name = "cylinder-loss depth<=" + std::to_string(params.cyl_len);
    item.pass = bad.empty();
    item.details = bad.empty()
                       ? std::to_string(checked) + " cylinders checked" + (truncated ? " (guard hit)" : "")
                       : head_list(bad);
    rep.items.push_back(std::move(item));
  }

  return rep;
}

}  // namespace pf
