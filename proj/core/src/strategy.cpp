#include "parity_forge/strategy.hpp"

#include <algorithm>

#include "parity_forge/errors.hpp"
#include "parity_forge/rng.hpp"

namespace pf {

std::string to_string(StratClass c) {
  switch (c) {
    case StratClass::MD: return "md";
    case StratClass::Markov: return "markov";
    case StratClass::KBit: return "kbit";
    case StratClass::KBitMarkov: return "kbit-markov";
    case StratClass::GeneralFinite: return "finite";
  }
  return "?";
}

StratClass strat_class_from_string(const std::string& s) {
  if (s == "md") return StratClass::MD;
  if (s == "markov") return StratClass::Markov;
  if (s == "kbit") return StratClass::KBit;
  if (s == "kbit-markov") return StratClass::KBitMarkov;
  if (s == "finite") return StratClass::GeneralFinite;
  throw InputError("unknown strategy class '" + s + "'");
}

std::string Mode::str() const {
  std::string out;
  if (step) out += "s=" + std::to_string(*step);
  if (bits) {
    if (!out.empty()) out += ",";
    out += "b=" + *bits;
  }
  return out;
}

void Strategy::index() const {
  if (indexed_) return;
  by_ms_.clear();
  by_mst_.clear();
  for (size_t i = 0; i < table.size(); ++i) {
    const Row& r = table[i];
    by_ms_.try_emplace({r.m, r.s}, i);
    by_mst_.try_emplace({r.m, r.s, r.to}, i);
  }
  indexed_ = true;
}

void Strategy::invalidate_lookup() { indexed_ = false; }

namespace {

// Lookup relaxation order: exact mode, then dropping the step, the bits, and
// both. Wildcard rows let an MD table serve as a Markov or k-bit strategy
// without unrolling it.
std::vector<Mode> relaxations(const Mode& m) {
  std::vector<Mode> out{m};
  if (m.step) out.push_back(Mode{std::nullopt, m.bits});
  if (m.bits) out.push_back(Mode{m.step, std::nullopt});
  if (m.step && m.bits) out.push_back(Mode{});
  return out;
}

}  // namespace

const Strategy::Row* Strategy::controlled_row(const Mode& m, const std::string& s) const {
  index();
  for (const Mode& rm : relaxations(m)) {
    auto it = by_ms_.find({rm, s});
    if (it != by_ms_.end()) return &table[it->second];
  }
  return nullptr;
}

const Strategy::Row* Strategy::random_row(const Mode& m, const std::string& s,
                                          const std::string& to) const {
  index();
  for (const Mode& rm : relaxations(m)) {
    auto it = by_mst_.find({rm, s, to});
    if (it != by_mst_.end()) return &table[it->second];
  }
  return nullptr;
}

Strategy Strategy::as_class(StratClass target, int bits_width) const {
  if (cls == target) return *this;
  if (cls != StratClass::MD)
    throw InputError("only MD strategies re-tag into other classes");
  Strategy out = *this;
  out.cls = target;
  bool wants_step = target == StratClass::Markov || target == StratClass::KBitMarkov;
  bool wants_bits = target == StratClass::KBit || target == StratClass::KBitMarkov ||
                    target == StratClass::GeneralFinite;
  out.k = wants_bits ? bits_width : 0;
  out.m0 = Mode{};
  if (wants_step) out.m0.step = 0;
  if (wants_bits) out.m0.bits = std::string(static_cast<size_t>(bits_width), '0');
  out.invalidate_lookup();
  return out;
}

std::vector<std::string> check_class_invariants(const Strategy& s) {
  std::vector<std::string> out;
  bool wants_step = s.cls == StratClass::Markov || s.cls == StratClass::KBitMarkov;
  bool wants_bits = s.cls == StratClass::KBit || s.cls == StratClass::KBitMarkov ||
                    s.cls == StratClass::GeneralFinite;
  auto bits_ok = [&](const std::optional<std::string>& b) {
    if (!b) return true;
    if (s.cls == StratClass::GeneralFinite) return true;
    if (static_cast<int>(b->size()) != s.k) return false;
    return b->find_first_not_of("01") == std::string::npos;
  };
  if (wants_step && !s.m0.step) out.push_back("initial mode lacks a step counter");
  if (!wants_step && s.m0.step) out.push_back("initial mode has a step counter");
  if (wants_bits && !s.m0.bits) out.push_back("initial mode lacks memory bits");
  if (!wants_bits && s.m0.bits) out.push_back("initial mode has memory bits");
  if (!bits_ok(s.m0.bits)) out.push_back("initial mode bits malformed");
  for (size_t i = 0; i < s.table.size(); ++i) {
    const auto& r = s.table[i];
    std::string at = "row " + std::to_string(i) + " (" + r.s + ")";
    if (!wants_step && (r.m.step || r.m2.step)) out.push_back(at + ": unexpected step");
    if (!wants_bits && (r.m.bits || r.m2.bits)) out.push_back(at + ": unexpected bits");
    if (wants_step) {
      if (r.m.step.has_value() != r.m2.step.has_value())
        out.push_back(at + ": step present on one side only");
      else if (r.m.step && *r.m2.step != *r.m.step + 1)
        out.push_back(at + ": step does not advance by one");
    }
    if (!bits_ok(r.m.bits) || !bits_ok(r.m2.bits)) out.push_back(at + ": bits malformed");
  }
  return out;
}

Strategy md_from_choices(const ExplicitMdp& m, const std::vector<StateIdx>& choice) {
  Strategy out;
  out.cls = StratClass::MD;
  for (int i = 0; i < m.size(); ++i) {
    const State& st = m.at(i);
    if (!st.controlled) continue;
    StateIdx pick = i < static_cast<int>(choice.size()) ? choice[static_cast<size_t>(i)] : -1;
    if (pick < 0) {
      pick = st.succ.empty() ? -1 : st.succ[0].to;
      for (const Edge& e : st.succ) pick = std::min(pick, e.to);
    }
    if (pick < 0) continue;
    bool ok = false;
    for (const Edge& e : st.succ) ok = ok || e.to == pick;
    if (!ok)
      throw InputError("choice for '" + st.id + "' is not a successor");
    out.table.push_back({Mode{}, st.id, m.at(pick).id, Mode{}});
  }
  return out;
}

std::vector<StateIdx> choices_of_md(const ExplicitMdp& m, const Strategy& s) {
  std::vector<StateIdx> out(m.states.size(), -1);
  for (int i = 0; i < m.size(); ++i) {
    if (!m.at(i).controlled) continue;
    if (const auto* row = s.controlled_row(Mode{}, m.at(i).id))
      out[static_cast<size_t>(i)] = m.find(row->to);
  }
  return out;
}

StateIdx InducedChain::product(const Mode& m, StateIdx s) const {
  auto it = product_index.find({m, s});
  return it == product_index.end() ? -1 : it->second;
}

namespace {

uint64_t saturation_bound(const Strategy& s) {
  if (s.horizon) return *s.horizon;
  uint64_t hi = 0;
  for (const auto& r : s.table) {
    if (r.m.step) hi = std::max(hi, *r.m.step + 1);
    if (r.m2.step) hi = std::max(hi, *r.m2.step + 1);
  }
  return hi;
}

StateIdx lowest_successor(const State& st) {
  StateIdx pick = st.succ[0].to;
  for (const Edge& e : st.succ) pick = std::min(pick, e.to);
  return pick;
}

}  // namespace

InducedChain induce_chain(const ExplicitMdp& m, const Strategy& sigma,
                          const std::vector<StateIdx>& from) {
  if (sigma.default_rule && *sigma.default_rule != "lowest")
    throw InputError("unknown default_rule '" + *sigma.default_rule + "'");
  const uint64_t sat = saturation_bound(sigma);
  auto clamp_step = [&](uint64_t v) { return std::min(v, sat); };
  auto next_mode = [&](const Mode& cur, const Mode& m2) {
    Mode out;
    if (m2.step)
      out.step = *m2.step;
    else if (cur.step)
      out.step = clamp_step(*cur.step + 1);
    out.bits = m2.bits ? m2.bits : cur.bits;
    return out;
  };

  InducedChain out;
  auto intern = [&](const Mode& mode, StateIdx s) {
    auto it = out.product_index.find({mode, s});
    if (it != out.product_index.end()) return it->second;
    std::string id = m.at(s).id;
    if (!mode.str().empty()) id += "@@" + mode.str();
    StateIdx c = out.chain.add_state(std::move(id), false, m.at(s).color);
    out.product_index.emplace(std::make_pair(mode, s), c);
    out.origin.emplace_back(mode, s);
    return c;
  };

  for (StateIdx s : from) {
    StateIdx c = intern(sigma.m0, s);
    out.chain.initial.push_back(c);
  }
  for (size_t q = 0; q < out.chain.states.size(); ++q) {
    auto [mode, s] = out.origin[q];
    const State& st = m.at(s);
    if (st.succ.empty())
      throw InputError("state '" + st.id + "' has no successor");
    std::vector<Edge> edges;
    if (st.controlled) {
      const Strategy::Row* row = sigma.controlled_row(mode, st.id);
      StateIdx to;
      Mode nm;
      if (row) {
        to = m.find(row->to);
        bool ok = false;
        for (const Edge& e : st.succ) ok = ok || e.to == to;
        if (to < 0 || !ok)
          throw InputError("strategy picks '" + row->to + "' which is not a successor of '" +
                           st.id + "'");
        nm = next_mode(mode, row->m2);
      } else {
        bool past_horizon = sigma.horizon && mode.step && *mode.step >= *sigma.horizon;
        if (past_horizon && !sigma.default_rule) throw horizon_escape(st.id);
        if (!past_horizon) throw undefined_choice(st.id, mode.str());
        out.used_default_rule = true;
        to = lowest_successor(st);
        nm = next_mode(mode, Mode{});
      }
      edges.push_back(Edge{intern(nm, to), Rat(1)});
    } else {
      for (const Edge& e : st.succ) {
        const Strategy::Row* row = sigma.random_row(mode, st.id, m.at(e.to).id);
        Mode nm = next_mode(mode, row ? row->m2 : Mode{});
        StateIdx c = intern(nm, e.to);
        // merge parallel transitions that land on the same product state
        bool merged = false;
        for (Edge& prev : edges)
          if (prev.to == c) {
            prev.p += e.p;
            merged = true;
            break;
          }
        if (!merged) edges.push_back(Edge{c, e.p});
      }
    }
    out.chain.states[q].succ = std::move(edges);
  }
  return out;
}

ExplicitMdp fix_strategy(const ExplicitMdp& m, const Strategy& sigma,
                         const std::vector<StateIdx>& region) {
  if (sigma.cls != StratClass::MD) throw InputError("fix_strategy needs an MD strategy");
  ExplicitMdp out = m;
  for (StateIdx s : region) {
    if (s < 0 || s >= m.size()) throw InputError("region state out of range");
    State& st = out.at(s);
    if (!st.controlled) continue;
    const Strategy::Row* row = sigma.controlled_row(Mode{}, st.id);
    if (!row) throw undefined_choice(st.id, "");
    StateIdx to = m.find(row->to);
    bool ok = false;
    for (const Edge& e : st.succ) ok = ok || e.to == to;
    if (to < 0 || !ok)
      throw InputError("strategy picks '" + row->to + "' which is not a successor of '" +
                       st.id + "'");
    st.controlled = false;
    st.succ = {Edge{to, Rat(1)}};
  }
  return out;
}

PartialRun sample_run(const InducedChain& chain, StateIdx start, uint64_t steps, uint64_t seed) {
  if (start < 0 || start >= chain.chain.size()) throw InputError("sample_run start out of range");
  Rng rng(seed);
  PartialRun out;
  StateIdx cur = start;
  out.states.push_back(cur);
  for (uint64_t i = 0; i < steps; ++i) {
    const auto& succ = chain.chain.at(cur).succ;
    if (succ.size() == 1) {
      cur = succ[0].to;
    } else {
      double u = rng.real();
      double acc = 0;
      StateIdx pick = succ.back().to;
      for (const Edge& e : succ) {
        acc += e.p.to_double();
        if (u < acc) {
          pick = e.to;
          break;
        }
      }
      cur = pick;
    }
    out.states.push_back(cur);
  }
  return out;
}

}  // namespace pf
