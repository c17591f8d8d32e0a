#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "parity_forge/transform.hpp"

namespace pf {

namespace {

std::string q_id(const std::string& src, int b) {
  return "(q:" + src + "," + std::to_string(b) + ")";
}

std::string t_id(const std::string& from, const std::string& to, int b) {
  return "(t:" + from + "->" + to + "," + std::to_string(b) + ")";
}

std::string bit_str(int b) { return b ? "1" : "0"; }

int bit_of_mode(const Mode& m, int fallback) {
  if (!m.bits) return fallback;
  if (*m.bits == "0") return 0;
  if (*m.bits == "1") return 1;
  throw InputError("expected a 1-bit mode, got bits \"" + *m.bits + "\"");
}

}  // namespace

StateIdx LayeredMdp::state_copy(StateIdx src, int b) const { return 2 * src + b; }

StateIdx LayeredMdp::transition_copy(StateIdx src, int edge_index, int b) const {
  return 2 * source.size() + 2 * (edge_base_[static_cast<size_t>(src)] + edge_index) + b;
}

LayeredMdp layer(const ExplicitMdp& m) {
  LayeredMdp l;
  l.source = m;
  const int n = m.size();
  l.edge_base_.resize(static_cast<size_t>(n));
  int edges = 0;
  for (int s = 0; s < n; ++s) {
    l.edge_base_[static_cast<size_t>(s)] = edges;
    edges += static_cast<int>(m.states[static_cast<size_t>(s)].succ.size());
  }

  for (int s = 0; s < n; ++s) {
    const auto& st = m.at(s);
    for (int b = 0; b < 2; ++b) {
      const StateIdx li = l.mdp.add_state(q_id(st.id, b), st.controlled, st.color);
      l.bit.push_back(b);
      l.source_state.push_back(s);
      l.source_edge.push_back({-1, -1});
      if (li != l.state_copy(s, b)) throw Error("internal: layered state order");
    }
  }
  for (int s = 0; s < n; ++s) {
    const auto& st = m.at(s);
    for (size_t i = 0; i < st.succ.size(); ++i) {
      const auto& dst = m.at(st.succ[i].to);
      for (int b = 0; b < 2; ++b) {
        const StateIdx li = l.mdp.add_state(t_id(st.id, dst.id, b), true, dst.color);
        l.bit.push_back(b);
        l.source_state.push_back(-1);
        l.source_edge.push_back({s, static_cast<int>(i)});
        if (li != l.transition_copy(s, static_cast<int>(i), b))
          throw Error("internal: layered transition order");
      }
    }
  }
  l.sibling.resize(l.mdp.states.size());
  for (size_t i = 0; i < l.sibling.size(); ++i)
    l.sibling[i] = static_cast<StateIdx>(l.bit[i] == 0 ? i + 1 : i - 1);

  for (int s = 0; s < n; ++s) {
    const auto& st = m.at(s);
    for (size_t i = 0; i < st.succ.size(); ++i) {
      for (int b = 0; b < 2; ++b) {
        const StateIdx from = l.state_copy(s, b);
        const StateIdx mid = l.transition_copy(s, static_cast<int>(i), b);
        l.mdp.at(from).succ.push_back(Edge{mid, st.succ[i].p});
        for (int j = 0; j < 2; ++j)
          l.mdp.at(mid).succ.push_back(Edge{l.state_copy(st.succ[i].to, j), Rat(1)});
      }
    }
  }
  for (StateIdx s0 : m.initial) l.mdp.initial.push_back(l.state_copy(s0, 0));

  // terminal source states are tolerated; only id collisions are fatal
  std::set<std::string> ids;
  for (const auto& st : l.mdp.states)
    if (!ids.insert(st.id).second)
      throw InputError("layer: source ids collide with layered ids at '" + st.id + "'");
  return l;
}

std::vector<StateIdx> closure(const LayeredMdp& l, std::vector<StateIdx> b) {
  const size_t k = b.size();
  for (size_t i = 0; i < k; ++i) b.push_back(l.sibling[static_cast<size_t>(b[i])]);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

Strategy unlayer_strategy(const LayeredMdp& l, const Strategy& tau) {
  Strategy u;
  u.cls = StratClass::KBit;
  u.k = 1;
  u.m0.bits = "0";
  const Mode md{};

  auto layered_target = [&](const Strategy::Row* row, StateIdx from) {
    const StateIdx to = l.mdp.find(row->to);
    if (to < 0) throw InputError("unlayer_strategy: row targets unknown state '" + row->to + "'");
    bool is_succ = false;
    for (const auto& e : l.mdp.at(from).succ)
      if (e.to == to) is_succ = true;
    if (!is_succ)
      throw InputError("unlayer_strategy: '" + row->to + "' is not a successor of '" +
                       l.mdp.at(from).id + "'");
    return to;
  };

  for (int s = 0; s < l.source.size(); ++s) {
    const auto& st = l.source.at(s);
    if (st.controlled) {
      for (int b = 0; b < 2; ++b) {
        const StateIdx q = l.state_copy(s, b);
        const auto* row1 = tau.controlled_row(md, l.mdp.at(q).id);
        if (!row1) continue;
        const StateIdx t = layered_target(row1, q);
        const auto& [src, edge_i] = l.source_edge[static_cast<size_t>(t)];
        const StateIdx dst = st.succ[static_cast<size_t>(edge_i)].to;
        const auto* row2 = tau.controlled_row(md, l.mdp.at(t).id);
        if (!row2) continue;
        const StateIdx q2 = layered_target(row2, t);
        Strategy::Row out;
        out.m.bits = bit_str(b);
        out.s = st.id;
        out.to = l.source.at(dst).id;
        out.m2.bits = bit_str(l.bit[static_cast<size_t>(q2)]);
        if (l.source_state[static_cast<size_t>(q2)] != dst)
          throw Error("internal: layered transition exits to a foreign state");
        (void)src;
        u.table.push_back(std::move(out));
      }
    } else {
      for (int b = 0; b < 2; ++b) {
        for (size_t i = 0; i < st.succ.size(); ++i) {
          const StateIdx t = l.transition_copy(s, static_cast<int>(i), b);
          const auto* row = tau.controlled_row(md, l.mdp.at(t).id);
          if (!row) continue;
          const StateIdx q2 = layered_target(row, t);
          Strategy::Row out;
          out.m.bits = bit_str(b);
          out.s = st.id;
          out.to = l.source.at(st.succ[i].to).id;
          out.m2.bits = bit_str(l.bit[static_cast<size_t>(q2)]);
          u.table.push_back(std::move(out));
        }
      }
    }
  }
  return u;
}

Strategy layer_strategy(const LayeredMdp& l, const Strategy& u) {
  Strategy tau;
  tau.cls = StratClass::MD;

  for (int s = 0; s < l.source.size(); ++s) {
    const auto& st = l.source.at(s);
    for (int b = 0; b < 2; ++b) {
      Mode mb;
      mb.bits = bit_str(b);
      if (st.controlled) {
        const auto* row = u.controlled_row(mb, st.id);
        if (!row) continue;
        int edge_i = -1;
        for (size_t i = 0; i < st.succ.size(); ++i)
          if (l.source.at(st.succ[i].to).id == row->to) edge_i = static_cast<int>(i);
        if (edge_i < 0)
          throw InputError("layer_strategy: '" + row->to + "' is not a successor of '" + st.id + "'");
        const int b2 = bit_of_mode(row->m2, b);
        const StateIdx dst = st.succ[static_cast<size_t>(edge_i)].to;
        tau.table.push_back({Mode{}, l.mdp.at(l.state_copy(s, b)).id,
                             l.mdp.at(l.transition_copy(s, edge_i, b)).id, Mode{}});
        tau.table.push_back({Mode{}, l.mdp.at(l.transition_copy(s, edge_i, b)).id,
                             l.mdp.at(l.state_copy(dst, b2)).id, Mode{}});
      } else {
        for (size_t i = 0; i < st.succ.size(); ++i) {
          const StateIdx dst = st.succ[i].to;
          const auto* row = u.random_row(mb, st.id, l.source.at(dst).id);
          const int b2 = row ? bit_of_mode(row->m2, b) : b;
          tau.table.push_back({Mode{}, l.mdp.at(l.transition_copy(s, static_cast<int>(i), b)).id,
                               l.mdp.at(l.state_copy(dst, b2)).id, Mode{}});
        }
      }
    }
  }
  return tau;
}

// --- step-counter expansion ---

namespace {

std::pair<std::string, uint64_t> split_step_id(const std::string& id) {
  const auto pos = id.rfind('@');
  if (pos == std::string::npos || pos + 1 == id.size())
    throw InputError("expected a step-tagged id like \"s@3\", got \"" + id + "\"");
  for (size_t i = pos + 1; i < id.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i])))
      throw InputError("expected a step-tagged id like \"s@3\", got \"" + id + "\"");
  return {id.substr(0, pos), std::stoull(id.substr(pos + 1))};
}

std::string step_id(const std::string& src, uint64_t n) { return src + "@" + std::to_string(n); }

}  // namespace

MdpModel acyclify(const MdpModel& m) {
  MdpModel out;
  for (const auto& id : m.initial) out.initial.push_back(step_id(id, 0));
  out.controlled = [m](const std::string& id) { return m.controlled(split_step_id(id).first); };
  out.color = [m](const std::string& id) { return m.color(split_step_id(id).first); };
  out.succ_at = [m](const std::string& id, uint64_t i) -> std::optional<SuccEntry> {
    const auto [src, n] = split_step_id(id);
    auto e = m.succ_at(src, i);
    if (!e) return std::nullopt;
    return SuccEntry{step_id(e->id, n + 1), e->p};
  };
  out.tail_mass_after = [m](const std::string& id, uint64_t k) {
    return m.tail_mass_after(split_step_id(id).first, k);
  };
  out.palette = m.palette;
  out.declared_acyclic = true;
  out.declared_finitely_branching = m.declared_finitely_branching;
  return out;
}

Strategy strategy_from_acyclic(const Strategy& sigma) {
  Strategy out = sigma;
  out.table.clear();
  switch (sigma.cls) {
    case StratClass::MD:
      out.cls = StratClass::Markov;
      break;
    case StratClass::KBit:
      out.cls = StratClass::KBitMarkov;
      break;
    default:
      throw InputError("strategy_from_acyclic expects an md or kbit strategy");
  }
  out.m0.step = 0;
  for (const auto& row : sigma.table) {
    const auto [src, n] = split_step_id(row.s);
    const auto [dst, n2] = split_step_id(row.to);
    if (n2 != n + 1)
      throw InputError("strategy_from_acyclic: row steps " + row.s + " -> " + row.to +
                       " are not consecutive");
    Strategy::Row r = row;
    r.s = src;
    r.to = dst;
    r.m.step = n;
    r.m2.step = n2;
    out.table.push_back(std::move(r));
  }
  out.invalidate_lookup();
  return out;
}

Strategy strategy_to_acyclic(const Strategy& sigma) {
  Strategy out = sigma;
  out.table.clear();
  switch (sigma.cls) {
    case StratClass::Markov:
      out.cls = StratClass::MD;
      break;
    case StratClass::KBitMarkov:
      out.cls = StratClass::KBit;
      break;
    default:
      throw InputError("strategy_to_acyclic expects a markov or kbit-markov strategy");
  }
  out.m0.step.reset();
  for (const auto& row : sigma.table) {
    if (!row.m.step) throw InputError("strategy_to_acyclic: row lacks a step index");
    Strategy::Row r = row;
    const uint64_t n = *row.m.step;
    r.s = step_id(row.s, n);
    r.to = step_id(row.to, row.m2.step ? *row.m2.step : n + 1);
    r.m.step.reset();
    r.m2.step.reset();
    out.table.push_back(std::move(r));
  }
  out.invalidate_lookup();
  return out;
}

// --- ladder gadgets ---

namespace {

// "<src>#rung<i>" for i >= 1; rung 0 is the original id
std::optional<std::pair<std::string, uint64_t>> parse_rung(const std::string& id) {
  const auto pos = id.rfind("#rung");
  if (pos == std::string::npos) return std::nullopt;
  const size_t digits = pos + 5;
  if (digits == id.size()) return std::nullopt;
  for (size_t i = digits; i < id.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return std::nullopt;
  const uint64_t n = std::stoull(id.substr(digits));
  if (n == 0) return std::nullopt;
  return std::make_pair(id.substr(0, pos), n);
}

std::string rung_id(const std::string& src, uint64_t i) {
  return src + "#rung" + std::to_string(i);
}

}  // namespace

Ladderized ladderize(const MdpModel& m, uint64_t branch_cap) {
  if (branch_cap < 1) throw InputError("branch_cap must be >= 1");
  Ladderized out;
  out.source = m;
  out.branch_cap = branch_cap;
  MdpModel& r = out.model;

  auto wide = [m, branch_cap](const std::string& id) {
    return m.succ_at(id, branch_cap).has_value();
  };
  // resolve an output id to (source id, rung index); rung 0 covers both the
  // narrow pass-through case and a wide state's entry point
  auto locate = [](const std::string& id) -> std::pair<std::string, uint64_t> {
    if (auto rung = parse_rung(id)) return *rung;
    return {id, 0};
  };

  r.initial = m.initial;
  r.controlled = [m, locate](const std::string& id) { return m.controlled(locate(id).first); };
  r.color = [m, locate](const std::string& id) {
    const auto [src, i] = locate(id);
    return i == 0 ? m.color(src) + 2 : 1;
  };
  r.succ_at = [m, wide, locate](const std::string& id, uint64_t j) -> std::optional<SuccEntry> {
    const auto [src, i] = locate(id);
    if (i == 0 && !wide(src)) return m.succ_at(src, j);
    const auto here = m.succ_at(src, i);
    if (!here) throw InputError("rung index out of range: " + id);
    const bool next = m.succ_at(src, i + 1).has_value();
    if (m.controlled(src)) {
      if (j == 0) return SuccEntry{here->id, Rat(1)};
      if (j == 1 && next) return SuccEntry{rung_id(src, i + 1), Rat(1)};
      return std::nullopt;
    }
    Rat before(0);
    for (uint64_t k = 0; k < i; ++k) before += m.succ_at(src, k)->p;
    const Rat denom = Rat(1) - before;
    if (!(denom > Rat(0))) throw Error("ladderize: rung below an exhausted distribution");
    const Rat exit_p = here->p / denom;
    if (j == 0) return SuccEntry{here->id, exit_p};
    if (j == 1 && next && exit_p < Rat(1)) return SuccEntry{rung_id(src, i + 1), Rat(1) - exit_p};
    return std::nullopt;
  };
  r.tail_mass_after = [m, r_succ = r.succ_at, wide, locate](const std::string& id,
                                                            uint64_t k) -> std::optional<Rat> {
    const auto [src, i] = locate(id);
    if (i == 0 && !wide(src)) return m.tail_mass_after(src, k);
    Rat tail(0);
    for (uint64_t j = k; j < 2; ++j) {
      auto e = r_succ(id, j);
      if (e) tail += e->p;
    }
    return tail;
  };
  {
    std::set<int> pal{1};
    for (int c : m.palette) pal.insert(c + 2);
    r.palette.assign(pal.begin(), pal.end());
  }
  r.declared_acyclic = m.declared_acyclic;
  r.declared_finitely_branching = true;
  return out;
}

Strategy Ladderized::pull_back(const Strategy& sigma) const {
  Strategy in = sigma;
  if (in.cls == StratClass::MD) in = in.as_class(StratClass::KBit, 1);
  if (in.cls != StratClass::KBit || in.k != 1)
    throw InputError("pull_back expects a 1-bit strategy on the ladder");

  Strategy out;
  out.cls = StratClass::KBit;
  out.k = 1;
  out.m0 = in.m0;
  if (!out.m0.bits) out.m0.bits = "0";

  auto wide = [this](const std::string& id) {
    return source.succ_at(id, branch_cap).has_value();
  };

  // source states touched by the table, in first-appearance order
  std::vector<std::string> roots;
  std::set<std::string> seen;
  for (const auto& row : in.table) {
    auto rung = parse_rung(row.s);
    const std::string src = rung ? rung->first : row.s;
    if (seen.insert(src).second) roots.push_back(src);
  }

  for (const auto& src : roots) {
    if (source.controlled(src)) {
      for (int b = 0; b < 2; ++b) {
        int bit = b;
        uint64_t i = 0;
        size_t guard = in.table.size() + 1;
        while (guard-- > 0) {
          const std::string cur = i == 0 ? src : rung_id(src, i);
          Mode mb;
          mb.bits = bit_str(bit);
          const auto* row = in.controlled_row(mb, cur);
          if (!row) break;
          const int bit2 = bit_of_mode(row->m2, bit);
          auto down = parse_rung(row->to);
          if (wide(src) && down && down->first == src && down->second == i + 1) {
            bit = bit2;
            i = down->second;
            continue;
          }
          // exit edge: must match the i-th source successor when the gadget fired
          if (wide(src)) {
            const auto e = source.succ_at(src, i);
            if (!e || e->id != row->to)
              throw InputError("pull_back: rung " + cur + " exits to '" + row->to +
                               "' which is not the matching source successor");
          }
          Strategy::Row r;
          r.m.bits = bit_str(b);
          r.s = src;
          r.to = row->to;
          r.m2.bits = bit_str(bit2);
          out.table.push_back(std::move(r));
          break;
        }
      }
    } else {
      // collect the exits the table mentions for this state's gadget
      struct Exit {
        uint64_t i;
        std::string target;
      };
      std::vector<Exit> exits;
      if (!wide(src)) {
        for (const auto& row : in.table)
          if (row.s == src) exits.push_back({0, row.to});
      } else {
        for (const auto& row : in.table) {
          auto rung = parse_rung(row.s);
          uint64_t i;
          if (row.s == src)
            i = 0;
          else if (rung && rung->first == src)
            i = rung->second;
          else
            continue;
          auto down = parse_rung(row.to);
          if (down && down->first == src && down->second == i + 1) continue;
          exits.push_back({i, row.to});
        }
      }
      std::set<std::pair<uint64_t, std::string>> done;
      for (const auto& ex : exits) {
        if (!done.insert({ex.i, ex.target}).second) continue;
        for (int b = 0; b < 2; ++b) {
          int bit = b;
          if (wide(src)) {
            const auto e = source.succ_at(src, ex.i);
            if (!e || e->id != ex.target)
              throw InputError("pull_back: rung exit to '" + ex.target +
                               "' does not match the source successor at rank " +
                               std::to_string(ex.i));
            // follow the unique rung path, composing observed-bit updates
            for (uint64_t k = 0; k < ex.i; ++k) {
              Mode mb;
              mb.bits = bit_str(bit);
              const std::string cur = k == 0 ? src : rung_id(src, k);
              const auto* row = in.random_row(mb, cur, rung_id(src, k + 1));
              if (row) bit = bit_of_mode(row->m2, bit);
            }
          }
          Mode mb;
          mb.bits = bit_str(bit);
          const std::string cur = ex.i == 0 ? src : rung_id(src, ex.i);
          const auto* row = in.random_row(mb, cur, ex.target);
          const int bit2 = row ? bit_of_mode(row->m2, bit) : bit;
          if (!row && bit2 == b) continue;  // default behaviour, no row needed
          Strategy::Row r;
          r.m.bits = bit_str(b);
          r.s = src;
          r.to = ex.target;
          r.m2.bits = bit_str(bit2);
          out.table.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

// --- conditioning ---

ExplicitMdp condition(const ExplicitMdp& m, const Objective& obj) {
  if (obj.kind != Objective::Kind::parity)
    throw PreconditionError("NotTail", "conditioning requires a tail objective; use parity");
  const auto rep = solve_parity(m);
  const auto& val = rep.exact;

  std::vector<StateIdx> remap(m.states.size(), -1);
  ExplicitMdp out;
  for (int s = 0; s < m.size(); ++s) {
    if (val[static_cast<size_t>(s)].is_zero()) continue;
    const auto& st = m.at(s);
    remap[static_cast<size_t>(s)] = out.add_state(st.id, st.controlled, st.color);
  }
  if (out.states.empty()) throw empty_conditioned();

  for (int s = 0; s < m.size(); ++s) {
    const StateIdx ns = remap[static_cast<size_t>(s)];
    if (ns < 0) continue;
    const auto& st = m.at(s);
    const Rat& vs = val[static_cast<size_t>(s)];
    Rat row_sum(0);
    for (const auto& e : st.succ) {
      const StateIdx nt = remap[static_cast<size_t>(e.to)];
      if (nt < 0) continue;
      const Rat& vt = val[static_cast<size_t>(e.to)];
      if (st.controlled) {
        if (vt == vs) out.at(ns).succ.push_back(Edge{nt, Rat(1)});
      } else {
        const Rat p = e.p * vt / vs;
        row_sum += p;
        out.at(ns).succ.push_back(Edge{nt, p});
      }
    }
    if (st.controlled) {
      if (out.at(ns).succ.empty())
        throw Error("internal: conditioned controlled state lost all choices at '" + st.id + "'");
    } else if (!(row_sum == Rat(1))) {
      throw Error("internal: conditioned row does not sum to 1 at '" + st.id + "'");
    }
  }
  for (StateIdx s0 : m.initial)
    if (remap[static_cast<size_t>(s0)] >= 0) out.initial.push_back(remap[static_cast<size_t>(s0)]);
  return out;
}

// --- bubbles and truncation ---

bool Bubble::contains(const std::string& id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

Bubble bubble(const ExplicitMdp& m, const std::vector<StateIdx>& center, uint64_t radius) {
  if (center.empty()) throw InputError("bubble: empty center");
  Bubble out;
  out.radius = radius;
  std::vector<char> seen(m.states.size(), 0);
  std::vector<StateIdx> cur;
  for (StateIdx s : center) {
    out.center.push_back(m.at(s).id);
    if (!seen[static_cast<size_t>(s)]) {
      seen[static_cast<size_t>(s)] = 1;
      cur.push_back(s);
    }
  }
  for (uint64_t d = 0; d < radius && !cur.empty(); ++d) {
    std::vector<StateIdx> next;
    for (StateIdx s : cur)
      for (const auto& e : m.at(s).succ)
        if (!seen[static_cast<size_t>(e.to)]) {
          seen[static_cast<size_t>(e.to)] = 1;
          next.push_back(e.to);
        }
    cur = std::move(next);
  }
  for (size_t s = 0; s < seen.size(); ++s)
    if (seen[s]) out.members.push_back(m.at(static_cast<StateIdx>(s)).id);
  std::sort(out.members.begin(), out.members.end());
  return out;
}

Bubble bubble(const MdpModel& m, const std::vector<std::string>& center, uint64_t radius) {
  if (center.empty()) throw InputError("bubble: empty center");
  Bubble out;
  out.center = center;
  out.radius = radius;
  std::set<std::string> seen(center.begin(), center.end());
  std::vector<std::string> cur(seen.begin(), seen.end());
  for (uint64_t d = 0; d < radius && !cur.empty(); ++d) {
    std::vector<std::string> next;
    for (const auto& id : cur) {
      for (uint64_t i = 0;; ++i) {
        if (i >= kEnumGuard) throw infinite_branch(id);
        auto e = m.succ_at(id, i);
        if (!e) break;
        if (seen.insert(e->id).second) next.push_back(e->id);
      }
    }
    cur = std::move(next);
  }
  out.members.assign(seen.begin(), seen.end());
  return out;
}

ExplicitMdp truncate(const MdpModel& m, const std::vector<std::string>& s0, uint64_t radius,
                     uint64_t branch_cap, TruncMode mode) {
  MdpModel rooted = m;
  if (!s0.empty()) rooted.initial = s0;
  if (rooted.initial.empty()) throw InputError("truncate: no start states");
  auto mat = materialize(rooted, radius, branch_cap);
  ExplicitMdp g = std::move(mat.mdp);
  if (mat.frontier.cut_edges.empty()) return g;

  int cmax = 0;
  for (int c : m.palette) cmax = std::max(cmax, c);
  if (m.palette.empty())
    for (const auto& st : g.states) cmax = std::max(cmax, st.color);
  int sink_color;
  if (mode == TruncMode::pessimistic)
    sink_color = cmax % 2 == 1 ? cmax : cmax + 1;
  else
    sink_color = cmax % 2 == 0 ? cmax : cmax + 1;
  const StateIdx sink = g.add_state(
      mode == TruncMode::pessimistic ? kSinkLoseId : kSinkWinId, false, sink_color);
  g.at(sink).succ.push_back(Edge{sink, Rat(1)});

  std::set<StateIdx> controlled_cut;
  std::map<StateIdx, Rat> random_cut;
  for (const auto& cut : mat.frontier.cut_edges) {
    const StateIdx from = g.find(cut.from);
    if (from < 0) throw Error("internal: cut edge from unknown state");
    if (cut.controlled)
      controlled_cut.insert(from);
    else
      random_cut[from] += cut.mass;
  }
  for (StateIdx s : controlled_cut) g.at(s).succ.push_back(Edge{sink, Rat(1)});
  for (const auto& [s, mass] : random_cut) {
    if (mass.is_zero()) continue;
    g.at(s).succ.push_back(Edge{sink, mass});
  }
  return g;
}

}  // namespace pf
