#include "parity_forge/model.hpp"

#include "parity_forge/errors.hpp"

namespace pf {

MdpModel as_model(std::shared_ptr<const ExplicitMdp> m) {
  MdpModel out;
  for (StateIdx i : m->initial) out.initial.push_back(m->at(i).id);
  auto need = [m](const std::string& id) {
    StateIdx i = m->find(id);
    if (i < 0) throw InputError("unknown state '" + id + "'");
    return i;
  };
  out.controlled = [m, need](const std::string& id) { return m->at(need(id)).controlled; };
  out.color = [m, need](const std::string& id) { return m->at(need(id)).color; };
  out.succ_at = [m, need](const std::string& id, uint64_t i) -> std::optional<SuccEntry> {
    const auto& succ = m->at(need(id)).succ;
    if (i >= succ.size()) return std::nullopt;
    return SuccEntry{m->at(succ[i].to).id, succ[i].p};
  };
  out.tail_mass_after = [m, need](const std::string& id, uint64_t k) -> std::optional<Rat> {
    const auto& s = m->at(need(id));
    Rat tail;
    for (size_t i = k; i < s.succ.size(); ++i) tail += s.succ[i].p;
    return tail;
  };
  out.palette = [&] {
    auto ci = ColorInfo::of(*m);
    return std::vector<int>(ci.palette.begin(), ci.palette.end());
  }();
  out.declared_finitely_branching = true;
  return out;
}

Materialized materialize(const MdpModel& m, uint64_t horizon, uint64_t branch_cap) {
  if (branch_cap < 1) throw InputError("branch_cap must be >= 1");
  Materialized out;
  ExplicitMdp& g = out.mdp;
  std::map<std::string, StateIdx> index;
  std::vector<uint64_t> depth;

  auto intern = [&](const std::string& id, uint64_t d) {
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    StateIdx i = g.add_state(id, m.controlled(id), m.color(id));
    index.emplace(id, i);
    depth.push_back(d);
    return i;
  };

  for (const auto& id : m.initial) g.initial.push_back(intern(id, 0));

  // BFS by construction order: depths are nondecreasing along g.states.
  for (size_t q = 0; q < g.states.size(); ++q) {
    StateIdx s = static_cast<StateIdx>(q);
    const std::string id = g.at(s).id;  // copy: g.states may reallocate
    bool at_frontier = depth[q] == horizon;
    if (at_frontier) out.frontier.frontier.push_back(id);
    bool is_controlled = g.at(s).controlled;
    uint64_t cap = m.declared_finitely_branching ? kEnumGuard : branch_cap;
    uint64_t n = 0;
    std::vector<SuccEntry> entries;
    for (; n < cap; ++n) {
      auto e = m.succ_at(id, n);
      if (!e) break;
      entries.push_back(*e);
    }
    bool cut = false;
    if (n == cap) {
      if (m.declared_finitely_branching) throw nonterm_guard(id);
      if (m.succ_at(id, n)) {
        cut = true;
      }
    }
    if (cut) {
      if (is_controlled) {
        out.frontier.truncated_controlled.push_back(id);
        out.frontier.cut_edges.push_back({id, "", Rat(0), true});
      } else {
        auto tail = m.tail_mass_after(id, n);
        if (!tail)
          throw PreconditionError(
              "NontermGuard", "random state '" + id +
                                  "' exceeds branch_cap without declared finite "
                                  "branching and exposes no tail mass");
        out.frontier.residual.emplace(id, *tail);
        out.frontier.cut_edges.push_back({id, "", *tail, false});
      }
    }
    for (const auto& e : entries) {
      if (at_frontier && index.find(e.id) == index.end()) {
        // target would sit beyond the horizon
        out.frontier.cut_edges.push_back({id, e.id, is_controlled ? Rat(0) : e.p, is_controlled});
        continue;
      }
      StateIdx t = intern(e.id, depth[q] + 1);
      if (depth[static_cast<size_t>(t)] > horizon)
        throw Error("internal: BFS admitted a state beyond the horizon");
      g.at(s).succ.push_back(Edge{t, e.p});
    }
  }
  return out;
}

}  // namespace pf
