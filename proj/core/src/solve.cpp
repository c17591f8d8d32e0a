#include <algorithm>
#include <cmath>
#include <set>

#include "parity_forge/analysis.hpp"

namespace pf {

Objective Objective::reach(std::vector<StateIdx> t) {
  Objective o;
  o.kind = Kind::reach;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  o.target = std::move(t);
  return o;
}

Objective Objective::safety(std::vector<StateIdx> t) {
  Objective o = reach(std::move(t));
  o.kind = Kind::safety;
  return o;
}

std::string Objective::describe(const ExplicitMdp& m) const {
  if (kind == Kind::parity) return "parity";
  std::string out = kind == Kind::reach ? "reach:" : "safety:";
  for (size_t i = 0; i < target.size(); ++i) {
    if (i) out += ",";
    out += m.states[target[i]].id;
  }
  return out;
}

bool SafeSet::contains(StateIdx s) const {
  return std::binary_search(members.begin(), members.end(), s);
}

namespace {

std::vector<char> flags_of(const ExplicitMdp& m, const std::vector<StateIdx>& set) {
  std::vector<char> f(m.states.size(), 0);
  for (StateIdx s : set) f.at(static_cast<size_t>(s)) = 1;
  return f;
}

// graph reachability to `target` using every edge (controlled and random)
std::vector<char> can_reach(const ExplicitMdp& m, const std::vector<char>& target) {
  const size_t n = m.states.size();
  std::vector<std::vector<StateIdx>> rev(n);
  for (size_t s = 0; s < n; ++s)
    for (const auto& e : m.states[s].succ) rev[e.to].push_back(static_cast<StateIdx>(s));
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
  return can;
}

// Markov chain induced by an MD choice vector (Dirac rows at controlled states)
ExplicitMdp apply_policy(const ExplicitMdp& m, const std::vector<StateIdx>& choice) {
  ExplicitMdp chain = m;
  for (size_t s = 0; s < chain.states.size(); ++s) {
    auto& st = chain.states[s];
    if (!st.controlled) continue;
    StateIdx c = choice[s];
    if (c < 0) c = st.succ.front().to;
    st.controlled = false;
    st.succ = {Edge{c, Rat(1)}};
  }
  return chain;
}

constexpr int kMaxPiRounds = 100000;

struct PiResult {
  std::vector<Rat> values;          // probability of reaching `target`
  std::vector<StateIdx> choice;     // final policy (-1 where irrelevant)
};

// Maximizing policy iteration for reachability. Policies are evaluated by an
// exact least-fixpoint chain solve, switches require strict improvement, ties
// go to the lowest-index successor.
PiResult max_reach_pi(const ExplicitMdp& m, const std::vector<char>& target) {
  const size_t n = m.states.size();
  const auto can = can_reach(m, target);
  std::vector<StateIdx> choice(n, -1);
  for (size_t s = 0; s < n; ++s) {
    if (!m.states[s].controlled) continue;
    // prefer a successor that keeps the target in the picture
    for (const auto& e : m.states[s].succ)
      if (can[e.to]) {
        choice[s] = e.to;
        break;
      }
    if (choice[s] < 0) choice[s] = m.states[s].succ.front().to;
  }
  std::vector<Rat> x;
  for (int round = 0;; ++round) {
    if (round >= kMaxPiRounds) throw Error("policy iteration failed to terminate");
    x = chain_reach(apply_policy(m, choice), target);
    bool switched = false;
    for (size_t s = 0; s < n; ++s) {
      if (!m.states[s].controlled || target[s]) continue;
      StateIdx best = choice[s];
      Rat best_v = x[best];
      for (const auto& e : m.states[s].succ)
        if (x[e.to] > best_v) {
          best = e.to;
          best_v = x[e.to];
        }
      if (best != choice[s]) {
        choice[s] = best;
        switched = true;
      }
    }
    if (!switched) break;
  }
  // Bellman check: optimal values are a fixpoint of the max operator
  for (size_t s = 0; s < n; ++s) {
    if (target[s]) continue;
    if (m.states[s].controlled) {
      Rat best(0);
      for (const auto& e : m.states[s].succ) best = std::max(best, x[e.to]);
      if (!(best == x[s])) throw Error("max-reach Bellman equation violated at '" + m.states[s].id + "'");
    } else {
      Rat sum(0);
      for (const auto& e : m.states[s].succ) sum = sum + e.p * x[e.to];
      if (!(sum == x[s])) throw Error("max-reach harmonic equation violated at '" + m.states[s].id + "'");
    }
  }
  // Canonical witness: the lowest-ranked maximizer that moves closer to the
  // target inside the argmax subgraph. Rank alone is not enough, a value-1
  // cycle of maximizers would stall the run forever.
  std::vector<int> dist(n, -1);
  for (size_t s = 0; s < n; ++s)
    if (target[s]) dist[s] = 0;
  for (int level = 1;; ++level) {
    bool any = false;
    for (size_t s = 0; s < n; ++s) {
      if (dist[s] != -1) continue;
      const auto& st = m.states[s];
      for (const auto& e : st.succ) {
        if (st.controlled && !(x[e.to] == x[s])) continue;
        if (dist[e.to] == level - 1) {
          dist[s] = level;
          any = true;
          break;
        }
      }
    }
    if (!any) break;
  }
  for (size_t s = 0; s < n; ++s) {
    const auto& st = m.states[s];
    if (!st.controlled) continue;
    StateIdx pick = -1;
    if (!target[s] && x[s].sign() > 0) {
      int bd = -1;
      for (const auto& e : st.succ) {
        if (!(x[e.to] == x[s]) || dist[e.to] < 0) continue;
        if (pick < 0 || dist[e.to] < bd || (dist[e.to] == bd && e.to < pick)) {
          pick = e.to;
          bd = dist[e.to];
        }
      }
    }
    if (pick < 0)
      for (const auto& e : st.succ)
        if (pick < 0 || e.to < pick) pick = e.to;
    choice[s] = pick;
  }
  const auto y = chain_reach(apply_policy(m, choice), target);
  for (size_t s = 0; s < n; ++s)
    if (!(y[s] == x[s]))
      throw CheckFailure("max-reach canonical witness lost value at '" + m.states[s].id + "'");
  return {std::move(x), std::move(choice)};
}

// Minimizing policy iteration for reachability of `target` (the controller
// avoids it). States in the surely-safe greatest fixpoint are pinned to 0 and
// the policy is pinned inside it; from everything else every policy is
// absorbed by target-or-pinned almost surely, so evaluation is a proper solve.
PiResult min_reach_pi(const ExplicitMdp& m, const std::vector<char>& target) {
  const size_t n = m.states.size();
  const auto safe = surely_safe_region(m, target);
  std::vector<StateIdx> choice(n, -1);
  for (size_t s = 0; s < n; ++s) {
    if (!m.states[s].controlled) continue;
    if (safe[s]) {
      for (const auto& e : m.states[s].succ)
        if (safe[e.to]) {
          choice[s] = e.to;
          break;
        }
    } else {
      choice[s] = m.states[s].succ.front().to;
    }
  }
  std::vector<Rat> x;
  for (int round = 0;; ++round) {
    if (round >= kMaxPiRounds) throw Error("policy iteration failed to terminate");
    x = chain_reach(apply_policy(m, choice), target);
    bool switched = false;
    for (size_t s = 0; s < n; ++s) {
      if (!m.states[s].controlled || target[s] || safe[s]) continue;
      StateIdx best = choice[s];
      Rat best_v = x[best];
      for (const auto& e : m.states[s].succ)
        if (x[e.to] < best_v) {
          best = e.to;
          best_v = x[e.to];
        }
      if (best != choice[s]) {
        choice[s] = best;
        switched = true;
      }
    }
    if (!switched) break;
  }
  for (size_t s = 0; s < n; ++s) {
    if (target[s]) continue;
    if (m.states[s].controlled) {
      Rat best(1);
      for (const auto& e : m.states[s].succ) best = std::min(best, x[e.to]);
      if (!(best == x[s])) throw Error("min-reach Bellman equation violated at '" + m.states[s].id + "'");
    } else {
      Rat sum(0);
      for (const auto& e : m.states[s].succ) sum = sum + e.p * x[e.to];
      if (!(sum == x[s])) throw Error("min-reach harmonic equation violated at '" + m.states[s].id + "'");
    }
  }
  // Canonical witness: lowest-ranked minimizer. Unlike maximal reach, every
  // locally minimizing policy attains the minimum, so rank alone suffices.
  for (size_t s = 0; s < n; ++s) {
    const auto& st = m.states[s];
    if (!st.controlled) continue;
    StateIdx pick = -1;
    for (const auto& e : st.succ)
      if (!target[s] && x[e.to] == x[s] && (pick < 0 || e.to < pick)) pick = e.to;
    if (pick < 0)
      for (const auto& e : st.succ)
        if (pick < 0 || e.to < pick) pick = e.to;
    choice[s] = pick;
  }
  const auto y = chain_reach(apply_policy(m, choice), target);
  for (size_t s = 0; s < n; ++s)
    if (!(y[s] == x[s]))
      throw CheckFailure("min-reach canonical witness lost value at '" + m.states[s].id + "'");
  return {std::move(x), std::move(choice)};
}

// shortest-path choices toward `goal` inside the end component `ec`; keeps the
// run in the component and makes its induced bottom components hit the goal
void ec_homing_choices(const ExplicitMdp& m, const std::vector<StateIdx>& ec,
                       const std::vector<char>& goal, std::vector<StateIdx>& choice) {
  std::vector<char> in = flags_of(m, ec);
  const size_t n = m.states.size();
  std::vector<int> dist(n, -1);
  std::vector<StateIdx> frontier;
  for (StateIdx s : ec)
    if (goal[s]) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  while (!frontier.empty()) {
    std::vector<StateIdx> next;
    for (StateIdx t : frontier)
      for (size_t s = 0; s < n; ++s) {
        if (!in[s] || dist[s] != -1) continue;
        for (const auto& e : m.states[s].succ)
          if (e.to == t) {
            dist[s] = dist[t] + 1;
            next.push_back(static_cast<StateIdx>(s));
            break;
          }
      }
    frontier = std::move(next);
  }
  for (StateIdx s : ec) {
    if (!m.states[s].controlled) continue;
    StateIdx best = -1;
    int bd = -1;
    for (const auto& e : m.states[s].succ) {
      if (!in[e.to] || dist[e.to] < 0) continue;
      if (best < 0 || dist[e.to] < bd || (dist[e.to] == bd && e.to < best)) {
        best = e.to;
        bd = dist[e.to];
      }
    }
    if (best >= 0) choice[s] = best;
  }
}

struct QuotientAction {
  double to_target = 0.0;  // mass straight into the reach target
  std::vector<std::pair<int, double>> moves;
};

struct QuotientNode {
  bool maximize = true;  // false only for singleton random nodes
  std::vector<QuotientAction> actions;
};

constexpr int kMaxViIters = 4000000;

// Interval value iteration for maximal reachability on the end-component
// quotient. Components are collapsed so the upper iteration converges to the
// same fixpoint as the lower one.
std::vector<std::pair<double, double>> interval_max_reach(const ExplicitMdp& m,
                                                          const std::vector<char>& target,
                                                          double tol) {
  const size_t n = m.states.size();
  // make the target absorbing before the qualitative analysis
  ExplicitMdp work = m;
  for (size_t s = 0; s < n; ++s)
    if (target[s]) {
      work.states[s].controlled = false;
      work.states[s].succ = {Edge{static_cast<StateIdx>(s), Rat(1)}};
    }
  const auto can = can_reach(work, target);

  std::vector<StateIdx> live;
  for (size_t s = 0; s < n; ++s)
    if (can[s] && !target[s]) live.push_back(static_cast<StateIdx>(s));
  std::vector<int> node_of(n, -1);
  std::vector<QuotientNode> nodes;
  const auto ecs = max_end_components(work, live);
  std::vector<char> grouped(n, 0);
  for (const auto& ec : ecs) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    for (StateIdx s : ec) {
      node_of[s] = id;
      grouped[s] = 1;
    }
  }
  for (StateIdx s : live)
    if (!grouped[s]) {
      node_of[s] = static_cast<int>(nodes.size());
      nodes.emplace_back();
      nodes.back().maximize = work.states[s].controlled;
    }

  auto add_edge = [&](QuotientAction& act, StateIdx to, double p) {
    if (target[to]) {
      act.to_target += p;
      return;
    }
    if (!can[to]) return;  // contributes zero forever
    const int q = node_of[to];
    for (auto& mv : act.moves)
      if (mv.first == q) {
        mv.second += p;
        return;
      }
    act.moves.push_back({q, p});
  };

  for (StateIdx s : live) {
    const int q = node_of[s];
    const auto& st = work.states[s];
    if (grouped[s]) {
      // inside a component only controlled exits matter
      if (!st.controlled) continue;
      for (const auto& e : st.succ) {
        if (node_of[e.to] == q && !target[e.to]) continue;
        QuotientAction act;
        add_edge(act, e.to, 1.0);
        nodes[q].actions.push_back(std::move(act));
      }
    } else if (st.controlled) {
      for (const auto& e : st.succ) {
        QuotientAction act;
        add_edge(act, e.to, 1.0);
        nodes[q].actions.push_back(std::move(act));
      }
    } else {
      QuotientAction act;
      for (const auto& e : st.succ) add_edge(act, e.to, e.p.to_double());
      nodes[q].actions.push_back(std::move(act));
    }
  }
  for (size_t q = 0; q < nodes.size(); ++q)
    if (nodes[q].actions.empty())
      throw Error("interval iteration: live component without actions");

  const size_t qn = nodes.size();
  std::vector<double> lo(qn, 0.0), hi(qn, 1.0), nlo(qn), nhi(qn);
  auto bellman = [&](const std::vector<double>& v, size_t q) {
    const auto& node = nodes[q];
    double best = node.maximize ? -1.0 : 2.0;
    for (const auto& act : node.actions) {
      double val = act.to_target;
      for (const auto& mv : act.moves) val += mv.second * v[mv.first];
      if (node.maximize ? val > best : val < best) best = val;
    }
    return best;
  };
  int it = 0;
  while (true) {
    double gap = 0.0;
    for (size_t q = 0; q < qn; ++q) {
      nlo[q] = bellman(lo, q);
      nhi[q] = bellman(hi, q);
      gap = std::max(gap, nhi[q] - nlo[q]);
    }
    lo.swap(nlo);
    hi.swap(nhi);
    if (gap <= tol) break;
    if (++it > kMaxViIters) throw Error("interval iteration did not converge");
  }

  std::vector<std::pair<double, double>> out(n, {0.0, 0.0});
  for (size_t s = 0; s < n; ++s) {
    if (target[s])
      out[s] = {1.0, 1.0};
    else if (can[s])
      out[s] = {std::max(0.0, lo[node_of[s]]), std::min(1.0, hi[node_of[s]])};
  }
  return out;
}

// Interval iteration for minimal reachability. After pinning the surely-safe
// region every policy is absorbed almost surely, so the fixpoint is unique and
// no quotient is needed.
std::vector<std::pair<double, double>> interval_min_reach(const ExplicitMdp& m,
                                                          const std::vector<char>& target,
                                                          double tol) {
  const size_t n = m.states.size();
  const auto safe = surely_safe_region(m, target);
  std::vector<double> lo(n), hi(n), nlo(n), nhi(n);
  for (size_t s = 0; s < n; ++s) {
    lo[s] = target[s] ? 1.0 : 0.0;
    hi[s] = safe[s] ? 0.0 : 1.0;
  }
  auto step = [&](const std::vector<double>& v, size_t s) {
    if (target[s]) return 1.0;
    if (safe[s]) return 0.0;
    const auto& st = m.states[s];
    if (st.controlled) {
      double best = 2.0;
      for (const auto& e : st.succ) best = std::min(best, v[e.to]);
      return best;
    }
    double sum = 0.0;
    for (const auto& e : st.succ) sum += e.p.to_double() * v[e.to];
    return sum;
  };
  int it = 0;
  while (true) {
    double gap = 0.0;
    for (size_t s = 0; s < n; ++s) {
      nlo[s] = step(lo, s);
      nhi[s] = step(hi, s);
      gap = std::max(gap, nhi[s] - nlo[s]);
    }
    lo.swap(nlo);
    hi.swap(nhi);
    if (gap <= tol) break;
    if (++it > kMaxViIters) throw Error("interval iteration did not converge");
  }
  std::vector<std::pair<double, double>> out(n);
  for (size_t s = 0; s < n; ++s) out[s] = {std::max(0.0, lo[s]), std::min(1.0, hi[s])};
  return out;
}

std::vector<StateIdx> parity_core_union(const ExplicitMdp& m, const EcDecomposition& dec) {
  std::vector<StateIdx> w;
  for (const auto& mec : dec.mecs)
    if (mec.winning) w.insert(w.end(), mec.winning_core.begin(), mec.winning_core.end());
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace

ValueReport solve_reach(const ExplicitMdp& m, const std::vector<StateIdx>& target,
                        NumMode mode, double tol) {
  ValueReport rep;
  rep.objective = Objective::reach(target);
  rep.mode = mode;
  const auto flags = flags_of(m, rep.objective.target);
  if (mode == NumMode::exact) {
    auto pi = max_reach_pi(m, flags);
    rep.exact = std::move(pi.values);
    rep.witness = md_from_choices(m, pi.choice);
  } else {
    rep.approx = interval_max_reach(m, flags, tol);
  }
  return rep;
}

ValueReport solve_safety(const ExplicitMdp& m, const std::vector<StateIdx>& avoid,
                         NumMode mode, double tol) {
  ValueReport rep;
  rep.objective = Objective::safety(avoid);
  rep.mode = mode;
  const auto flags = flags_of(m, rep.objective.target);
  if (mode == NumMode::exact) {
    auto pi = min_reach_pi(m, flags);
    rep.exact.resize(m.states.size());
    for (size_t s = 0; s < rep.exact.size(); ++s) rep.exact[s] = Rat(1) - pi.values[s];
    rep.witness = md_from_choices(m, pi.choice);
  } else {
    const auto r = interval_min_reach(m, flags, tol);
    rep.approx.resize(r.size());
    for (size_t s = 0; s < r.size(); ++s) rep.approx[s] = {1.0 - r[s].second, 1.0 - r[s].first};
  }
  return rep;
}

ValueReport solve_parity(const ExplicitMdp& m, NumMode mode, double tol) {
  const auto dec = mec_decomposition(m);
  const auto cores = parity_core_union(m, dec);
  const auto flags = flags_of(m, cores);
  ValueReport rep;
  rep.objective = Objective::parity();
  rep.mode = mode;
  if (mode == NumMode::exact) {
    auto pi = max_reach_pi(m, flags);
    // steer inside each winning core toward its top even color
    for (const auto& mec : dec.mecs) {
      if (!mec.winning) continue;
      int cmax = 0;
      for (StateIdx s : mec.winning_core) cmax = std::max(cmax, m.states[s].color);
      std::vector<char> goal(m.states.size(), 0);
      for (StateIdx s : mec.winning_core)
        if (m.states[s].color == cmax) goal[s] = 1;
      ec_homing_choices(m, mec.winning_core, goal, pi.choice);
    }
    rep.exact = std::move(pi.values);
    rep.witness = md_from_choices(m, pi.choice);
  } else {
    rep.approx = interval_max_reach(m, flags, tol);
  }
  return rep;
}

ValueReport solve(const ExplicitMdp& m, const Objective& obj, NumMode mode, double tol) {
  switch (obj.kind) {
    case Objective::Kind::parity:
      return solve_parity(m, mode, tol);
    case Objective::Kind::reach:
      return solve_reach(m, obj.target, mode, tol);
    case Objective::Kind::safety:
      return solve_safety(m, obj.target, mode, tol);
  }
  throw Error("solve: unknown objective");
}

SafeSet safe_set(const ExplicitMdp& m, const Strategy* sigma, const Objective& obj,
                 const Rat& beta) {
  SafeSet out;
  out.beta = beta;
  out.strategy_flavor = sigma != nullptr;
  if (!sigma) {
    const auto rep = solve(m, obj, NumMode::exact);
    for (size_t s = 0; s < m.states.size(); ++s)
      if (rep.exact[s] >= beta) out.members.push_back(static_cast<StateIdx>(s));
    return out;
  }
  std::vector<StateIdx> all(m.states.size());
  for (size_t s = 0; s < all.size(); ++s) all[s] = static_cast<StateIdx>(s);
  const auto ic = induce_chain(m, *sigma, all);
  const auto vals = chain_values(ic, obj);
  for (size_t s = 0; s < m.states.size(); ++s) {
    const StateIdx p = ic.product(sigma->m0, static_cast<StateIdx>(s));
    if (p >= 0 && vals[p] >= beta) out.members.push_back(static_cast<StateIdx>(s));
  }
  return out;
}

}  // namespace pf
