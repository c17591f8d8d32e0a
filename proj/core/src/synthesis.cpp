#include "parity_forge/synthesis.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "parity_forge/errors.hpp"

namespace pf {

namespace {

std::vector<StateIdx> all_states(const ExplicitMdp& m) {
  std::vector<StateIdx> v(m.states.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<char> mask_of(const ExplicitMdp& m, const std::vector<StateIdx>& xs) {
  std::vector<char> mk(m.states.size(), 0);
  for (StateIdx s : xs) mk[static_cast<size_t>(s)] = 1;
  return mk;
}

bool in_sorted(const std::vector<StateIdx>& v, StateIdx s) {
  return std::binary_search(v.begin(), v.end(), s);
}

std::vector<StateIdx> sorted_union(const std::vector<StateIdx>& a, const std::vector<StateIdx>& b) {
  std::vector<StateIdx> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// sibling-closed superset; empty sibling array means the trivial structure
std::vector<StateIdx> widen(const std::vector<StateIdx>& xs, const std::vector<StateIdx>& sibling) {
  std::vector<StateIdx> out = xs;
  if (!sibling.empty())
    for (StateIdx s : xs) out.push_back(sibling[static_cast<size_t>(s)]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// state becomes an absorbing self-loop of the given color, index space intact
void absorb(ExplicitMdp& m, StateIdx s, int color) {
  auto& st = m.at(s);
  st.color = color;
  st.succ = {{s, Rat(1)}};
}

// attainment of an MD strategy per source state, from its initial mode
std::vector<Rat> md_attainment(const ExplicitMdp& m, const Strategy& sigma, const Objective& obj) {
  const auto ic = induce_chain(m, sigma, all_states(m));
  const auto cv = chain_values(ic, obj);
  std::vector<Rat> out(m.states.size());
  for (StateIdx s = 0; s < m.size(); ++s)
    out[static_cast<size_t>(s)] = cv[static_cast<size_t>(ic.product(sigma.m0, s))];
  return out;
}

// Markov chain over the full index space: inside states follow the frozen
// choice (controlled) or their own distribution (random), outside states are
// absorbing color-1 loops. No controlled states remain.
ExplicitMdp frozen_chain(const ExplicitMdp& m, const std::vector<char>& inside,
                         const std::vector<StateIdx>& choice) {
  ExplicitMdp c;
  for (StateIdx s = 0; s < m.size(); ++s) c.add_state(m.at(s).id, false, m.at(s).color);
  for (StateIdx s = 0; s < m.size(); ++s) {
    auto& dst = c.at(s);
    if (!inside[static_cast<size_t>(s)]) {
      dst.color = 1;
      dst.succ = {{s, Rat(1)}};
      continue;
    }
    const auto& src = m.at(s);
    if (src.controlled) {
      const StateIdx t = choice[static_cast<size_t>(s)];
      if (t < 0) throw Error("frozen_chain: inside controlled state lacks a choice");
      dst.succ = {{t, Rat(1)}};
    } else {
      dst.succ = src.succ;
    }
  }
  return c;
}

// MD strategy with rows exactly at the chosen controlled states
Strategy partial_md(const ExplicitMdp& m, const std::vector<StateIdx>& choice,
                    const std::vector<StateIdx>& only) {
  Strategy s;
  s.cls = StratClass::MD;
  for (StateIdx i : only) {
    if (!m.at(i).controlled) continue;
    const StateIdx t = choice[static_cast<size_t>(i)];
    if (t < 0) throw Error("partial_md: frozen state lacks a choice");
    s.table.push_back({Mode{}, m.at(i).id, m.at(t).id, Mode{}});
  }
  return s;
}

void require_palette(const ExplicitMdp& m, int max_color, const char* who) {
  for (const auto& st : m.states)
    if (st.color < 0 || st.color > max_color)
      throw InputError(std::string(who) + ": colors must lie within {0.." +
                       std::to_string(max_color) + "}, found " + std::to_string(st.color) +
                       " at '" + st.id + "'");
}

void require_eps_range(const Rat& eps, const char* who) {
  if (eps.sign() < 0 || eps >= Rat(1))
    throw InputError(std::string(who) + ": epsilon must lie in [0,1), got " + eps.str());
}

}  // namespace

Strategy safety_eps_md(const ExplicitMdp& m, const std::vector<StateIdx>& avoid, const Rat& eps) {
  std::string cex;
  if (!is_acyclic(m, &cex)) throw not_acyclic(cex);
  require_eps_range(eps, "safety_eps_md");
  const auto rep = solve_safety(m, avoid);
  if (eps.is_zero()) return *rep.witness;
  const auto& vals = rep.exact;

  std::vector<StateIdx> choice(m.states.size(), -1);
  for (StateIdx s = 0; s < m.size(); ++s) {
    const auto& st = m.at(s);
    if (!st.controlled) continue;
    // slack shrinks with the 1-based enumeration rank so the total loss over
    // any run stays below eps multiplicatively
    const Rat thr = vals[static_cast<size_t>(s)] * (Rat(1) - eps * Rat::pow2(-(s + 1)));
    StateIdx best = -1;
    for (const auto& e : st.succ)
      if (vals[static_cast<size_t>(e.to)] >= thr && (best < 0 || e.to < best)) best = e.to;
    if (best < 0) throw Error("safety_eps_md: no successor meets the slack at '" + st.id + "'");
    choice[static_cast<size_t>(s)] = best;
  }
  Strategy sigma = md_from_choices(m, choice);

  const auto att = md_attainment(m, sigma, Objective::safety(avoid));
  for (StateIdx s = 0; s < m.size(); ++s)
    if (att[static_cast<size_t>(s)] < vals[static_cast<size_t>(s)] * (Rat(1) - eps))
      throw CheckFailure("safety_eps_md: attainment " + att[static_cast<size_t>(s)].str() +
                         " below val*(1-eps) at '" + m.at(s).id + "'");
  return sigma;
}

Strategy reach_eps_md(const ExplicitMdp& m, const std::vector<StateIdx>& target, const Rat& eps) {
  require_eps_range(eps, "reach_eps_md");
  return *solve_reach(m, target).witness;
}

Strategy cobuchi_eps_md(const ExplicitMdp& m, const Rat& eps) {
  require_palette(m, 1, "cobuchi_eps_md");
  require_eps_range(eps, "cobuchi_eps_md");
  const auto rep = solve_parity(m);
  if (eps.is_zero()) return *rep.witness;
  const auto& vals = rep.exact;

  const Rat e1 = eps / 4;
  const Rat k = Rat(2) / eps;
  const Rat lambda = e1 / (k * 2);
  const Rat tau1 = Rat(1) - e1;
  const Rat tau2 = Rat(1) - e1 / k + lambda;

  std::vector<StateIdx> avoid;
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).color == 1) avoid.push_back(s);
  const Objective saf = Objective::safety(avoid);

  const Strategy sig_av = *solve_safety(m, avoid).witness;
  const auto s_in = safe_set(m, &sig_av, saf, tau1).members;
  const ExplicitMdp frozen = fix_strategy(m, sig_av, s_in);
  // value-level set of the frozen MDP; reaching it almost settles the run
  const auto core = safe_set(frozen, nullptr, saf, tau2).members;
  const Strategy sig_reach = *solve_reach(frozen, core).witness;

  const auto zc = choices_of_md(m, sig_av);
  const auto rc = choices_of_md(frozen, sig_reach);
  std::vector<StateIdx> choice(m.states.size(), -1);
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).controlled) choice[static_cast<size_t>(s)] = in_sorted(s_in, s) ? zc[s] : rc[s];
  Strategy sigma = md_from_choices(m, choice);

  const auto att = md_attainment(m, sigma, Objective::parity());
  const Rat keep = Rat(1) - Rat(1) / k;
  for (StateIdx s = 0; s < m.size(); ++s) {
    const Rat& a = att[static_cast<size_t>(s)];
    const Rat& v = vals[static_cast<size_t>(s)];
    if (a < (v - e1 - e1) * keep || a < v - eps)
      throw CheckFailure("cobuchi_eps_md: attainment " + a.str() + " misses the bound at '" +
                         m.at(s).id + "' (val " + v.str() + ")");
  }
  return sigma;
}

Strategy as_win_012(const ExplicitMdp& m) {
  require_palette(m, 2, "as_win_012");
  const auto rep = solve_parity(m);
  for (StateIdx s = 0; s < m.size(); ++s)
    if (rep.exact[static_cast<size_t>(s)] != Rat(1)) throw not_almost_sure(m.at(s).id);

  std::vector<StateIdx> nonzero;
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).color != 0) nonzero.push_back(s);
  const Objective saf = Objective::safety(nonzero);

  const Strategy sig_z = *solve_safety(m, nonzero).witness;
  const auto s13 = safe_set(m, &sig_z, saf, Rat(1, 3)).members;
  const auto s23 = safe_set(m, &sig_z, saf, Rat(2, 3)).members;
  const ExplicitMdp frozen = fix_strategy(m, sig_z, s13);

  std::vector<StateIdx> color2;
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).color == 2) color2.push_back(s);
  const auto target = sorted_union(s23, color2);

  const auto rr = solve_reach(frozen, target);
  for (StateIdx s = 0; s < m.size(); ++s)
    if (rr.exact[static_cast<size_t>(s)] != Rat(1)) throw not_almost_sure(m.at(s).id);

  const auto zc = choices_of_md(m, sig_z);
  const auto rc = choices_of_md(frozen, *rr.witness);
  std::vector<StateIdx> choice(m.states.size(), -1);
  for (StateIdx s = 0; s < m.size(); ++s)
    if (m.at(s).controlled) choice[static_cast<size_t>(s)] = in_sorted(s13, s) ? zc[s] : rc[s];
  Strategy sigma = md_from_choices(m, choice);

  const auto att = md_attainment(m, sigma, Objective::parity());
  for (StateIdx s = 0; s < m.size(); ++s)
    if (att[static_cast<size_t>(s)] != Rat(1))
      throw CheckFailure("as_win_012: combined strategy attains only " +
                         att[static_cast<size_t>(s)].str() + " at '" + m.at(s).id + "'");
  return sigma;
}

Strategy uniformize_as(const ExplicitMdp& m, const Objective& obj, const AsEngine& engine) {
  {
    const auto rep = solve(m, obj);
    for (StateIdx s = 0; s < m.size(); ++s)
      if (rep.exact[static_cast<size_t>(s)] != Rat(1)) throw not_almost_sure(m.at(s).id);
  }
  const AsEngine eng = engine ? engine : [&obj](const ExplicitMdp& sub, StateIdx s) {
    const auto r = solve(sub, obj);
    if (r.exact[static_cast<size_t>(s)] != Rat(1)) throw not_almost_sure(sub.at(s).id);
    return *r.witness;
  };

  std::vector<char> covered(m.states.size(), 0);
  std::vector<StateIdx> choice(m.states.size(), -1);
  ExplicitMdp cur = m;
  for (;;) {
    StateIdx pick = -1;
    for (StateIdx s = 0; s < m.size(); ++s)
      if (!covered[static_cast<size_t>(s)]) {
        pick = s;
        break;
      }
    if (pick < 0) break;

    const Strategy part = eng(cur, pick);
    if (part.cls != StratClass::MD) throw Error("uniformize_as: engine must return MD strategies");
    const auto ic = induce_chain(cur, part, {pick});
    const auto cv = chain_values(ic, obj);
    if (cv[static_cast<size_t>(ic.product(part.m0, pick))] != Rat(1))
      throw not_almost_sure(m.at(pick).id);

    // states touched by plays from the pick; freeze the strategy exactly there
    std::vector<StateIdx> region;
    for (const auto& pr : ic.origin) region.push_back(pr.second);
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());

    const auto pc = choices_of_md(cur, part);
    std::vector<StateIdx> fresh;
    for (StateIdx s : region)
      if (!covered[static_cast<size_t>(s)]) {
        covered[static_cast<size_t>(s)] = 1;
        fresh.push_back(s);
        if (cur.at(s).controlled) choice[static_cast<size_t>(s)] = pc[static_cast<size_t>(s)];
      }
    cur = fix_strategy(cur, part, fresh);
  }

  Strategy sigma = md_from_choices(m, choice);
  const auto att = md_attainment(m, sigma, obj);
  for (StateIdx s = 0; s < m.size(); ++s)
    if (att[static_cast<size_t>(s)] != Rat(1))
      throw CheckFailure("uniformize_as: stitched strategy attains only " +
                         att[static_cast<size_t>(s)].str() + " at '" + m.at(s).id + "'");
  return sigma;
}

Strategy parity012_opt_md(const ExplicitMdp& m) {
  require_palette(m, 2, "parity012_opt_md");
  const auto rep = solve_parity(m);
  const auto& vals = rep.exact;

  bool any_positive = false;
  for (const auto& v : vals) any_positive = any_positive || !v.is_zero();
  if (!any_positive) return md_from_choices(m, std::vector<StateIdx>(m.states.size(), -1));

  const ExplicitMdp star = condition(m, Objective::parity());
  const Strategy sig_star = uniformize_as(
      star, Objective::parity(), [](const ExplicitMdp& sub, StateIdx) { return as_win_012(sub); });

  // positive-value states copy the conditioned choice; the rest are free
  const auto sc = choices_of_md(star, sig_star);
  std::vector<StateIdx> choice(m.states.size(), -1);
  for (StateIdx j = 0; j < star.size(); ++j) {
    if (!star.at(j).controlled || sc[static_cast<size_t>(j)] < 0) continue;
    const StateIdx i = m.find(star.at(j).id);
    choice[static_cast<size_t>(i)] = m.find(star.at(sc[static_cast<size_t>(j)]).id);
  }
  Strategy sigma = md_from_choices(m, choice);

  const auto att = md_attainment(m, sigma, Objective::parity());
  for (StateIdx s = 0; s < m.size(); ++s)
    if (!vals[static_cast<size_t>(s)].is_zero() &&
        att[static_cast<size_t>(s)] != vals[static_cast<size_t>(s)])
      throw CheckFailure("parity012_opt_md: attainment " + att[static_cast<size_t>(s)].str() +
                         " != value " + vals[static_cast<size_t>(s)].str() + " at '" + m.at(s).id +
                         "'");
  return sigma;
}

namespace {

// order- and parity-preserving relabeling onto {1,2,...} with no even gaps
std::vector<std::pair<int, int>> densify_map(const std::set<int>& palette) {
  std::vector<std::pair<int, int>> out;
  int prev_src = 0, prev_dst = 0;
  bool first = true;
  for (int c : palette) {
    int d;
    if (first) {
      d = (c % 2 == 0) ? 2 : 1;
      first = false;
    } else {
      d = prev_dst + ((c - prev_src) % 2 != 0 ? 1 : 2);
    }
    out.emplace_back(c, d);
    prev_src = c;
    prev_dst = d;
  }
  return out;
}

bool needs_densify(const ColorInfo& info) {
  if (info.palette.count(0)) return true;
  if (!info.e_max) return false;
  for (int c = 2; c <= *info.e_max; c += 2)
    if (!info.palette.count(c)) return true;
  return false;
}

Strategy plaster_core(const ExplicitMdp& input, const std::vector<StateIdx>& sibling,
                      const std::vector<StateIdx>& starts, const Rat& eps, PlasterReport* report) {
  require_eps_range(eps, "plaster_parity");
  PlasterReport local;
  PlasterReport& rep = report ? *report : local;
  rep = PlasterReport{};

  if (eps.is_zero()) {
    const auto r = solve_parity(input);
    rep.exact_route = true;
    rep.value = r.exact;
    rep.attainment = r.exact;
    return *r.witness;
  }

  ExplicitMdp work = input;
  const ColorInfo raw = ColorInfo::of(input);
  if (needs_densify(raw)) {
    rep.recolor = densify_map(raw.palette);
    for (auto& st : work.states)
      for (const auto& [from, to] : rep.recolor)
        if (st.color == from) {
          st.color = to;
          break;
        }
  }

  const auto vrep = solve_parity(work);
  const auto& vals = vrep.exact;
  rep.value = vals;

  const ColorInfo info = ColorInfo::of(work);
  if (!info.e_max) {
    // nothing to win through; every strategy attains the all-zero value
    rep.attainment = vals;
    return *vrep.witness;
  }
  const int e_max = *info.e_max;
  if (info.palette.count(0) || [&] {
        for (int c = 2; c <= e_max; c += 2)
          if (!info.palette.count(c)) return true;
        return false;
      }())
    throw encoding_overflow("densified palette still misses an even color below " +
                            std::to_string(e_max));

  const Rat gamma = eps / (e_max + 2);
  const Rat beta = Rat(1) - gamma;
  const Rat alpha = Rat(1) - gamma * gamma;
  rep.gamma = gamma;
  rep.beta = beta;
  rep.alpha = alpha;
  rep.e_max = e_max;

  ExplicitMdp cur = work;
  std::vector<StateIdx> fix_all;      // widened union of the frozen rounds
  std::vector<StateIdx> cores_union;  // reachability targets of the last phase
  std::vector<StateIdx> choice(work.states.size(), -1);
  std::vector<char> frozen(work.states.size(), 0);
  const Rat retain = (alpha - beta) / (Rat(1) - beta);  // equals 1 - gamma

  for (int e = 2; e <= e_max; e += 2) {
    // capped objective: outside earlier frozen regions, colors stay <= e and
    // e itself recurs
    ExplicitMdp enc = cur;
    for (StateIdx s = 0; s < enc.size(); ++s) {
      if (in_sorted(fix_all, s) || work.at(s).color > e)
        absorb(enc, s, 1);
      else
        enc.at(s).color = work.at(s).color == e ? 2 : 1;
    }
    const auto threp = solve_parity(enc);
    const Strategy tau = *threp.witness;
    const auto tc = choices_of_md(enc, tau);

    PlasterRound round;
    round.color = e;
    for (StateIdx s = 0; s < enc.size(); ++s)
      if (threp.exact[static_cast<size_t>(s)] >= alpha) round.high.push_back(s);
    round.fix = safe_set(enc, &tau, Objective::parity(), beta).members;
    round.core = safe_set(enc, &tau, Objective::parity(), alpha).members;

    if (!std::includes(round.fix.begin(), round.fix.end(), round.high.begin(), round.high.end()))
      throw CheckFailure("plaster_parity: alpha-value set escapes the frozen set at color " +
                         std::to_string(e));

    // runs started in the core rarely leave the frozen set, and those that
    // stay win through color e surely
    const auto fixmask = mask_of(cur, round.fix);
    const ExplicitMdp stay = frozen_chain(cur, fixmask, tc);
    const auto stayp = chain_stay(stay, fixmask);
    for (StateIdx s : round.core)
      if (stayp[static_cast<size_t>(s)] < retain)
        throw CheckFailure("plaster_parity: core state '" + cur.at(s).id + "' keeps only " +
                           stayp[static_cast<size_t>(s)].str() + " of its region at color " +
                           std::to_string(e));
    const auto reach_core = mask_of(stay, reachable(stay, round.core));
    for (const auto& scc : bottom_sccs(stay)) {
      bool inside = true, touched = false, has_e = false, capped = true;
      for (StateIdx s : scc) {
        inside = inside && fixmask[static_cast<size_t>(s)];
        touched = touched || reach_core[static_cast<size_t>(s)];
        has_e = has_e || work.at(s).color == e;
        capped = capped && work.at(s).color <= e;
      }
      if (inside && touched && !(has_e && capped))
        throw CheckFailure("plaster_parity: a terminal component at color " + std::to_string(e) +
                           " does not win through it");
    }

    for (StateIdx s : round.fix)
      if (cur.at(s).controlled) {
        choice[static_cast<size_t>(s)] = tc[static_cast<size_t>(s)];
        frozen[static_cast<size_t>(s)] = 1;
      }
    cur = fix_strategy(cur, tau, round.fix);
    fix_all = sorted_union(fix_all, widen(round.fix, sibling));
    cores_union = sorted_union(cores_union, round.core);

    // the frozen system keeps almost the full value: wins through handled
    // colors are folded into reaching a core
    if (!starts.empty()) {
      ExplicitMdp enc2 = cur;
      for (StateIdx s = 0; s < enc2.size(); ++s) {
        if (in_sorted(cores_union, s))
          absorb(enc2, s, 2);
        else if (in_sorted(fix_all, s))
          absorb(enc2, s, 1);
        else if (work.at(s).color <= e)
          enc2.at(s).color = 1;
      }
      const auto floor_vals = solve_parity(enc2).exact;
      for (StateIdx l0 : starts) {
        const Rat lhs = floor_vals[static_cast<size_t>(l0)];
        const Rat rhs = vals[static_cast<size_t>(l0)] - Rat(e) * gamma;
        if (lhs < rhs)
          throw CheckFailure("plaster_parity: frozen value " + lhs.str() + " dropped below " +
                             rhs.str() + " at '" + work.at(l0).id + "' after color " +
                             std::to_string(e));
        round.floor_lhs.push_back(lhs);
        round.floor_rhs.push_back(rhs);
      }
    }
    rep.rounds.push_back(std::move(round));
  }

  const auto rrep = solve_reach(cur, cores_union);
  const auto rc = choices_of_md(cur, *rrep.witness);
  for (StateIdx s = 0; s < work.size(); ++s)
    if (work.at(s).controlled && !frozen[static_cast<size_t>(s)])
      choice[static_cast<size_t>(s)] = rc[static_cast<size_t>(s)];
  Strategy sigma = md_from_choices(input, choice);

  const auto att = md_attainment(work, sigma, Objective::parity());
  rep.attainment = att;
  for (StateIdx s = 0; s < work.size(); ++s)
    if (att[static_cast<size_t>(s)] < vals[static_cast<size_t>(s)] - eps)
      throw CheckFailure("plaster_parity: attainment " + att[static_cast<size_t>(s)].str() +
                         " misses val - eps at '" + work.at(s).id + "'");
  return sigma;
}

}  // namespace

Strategy plaster_parity(const LayeredMdp& l, const std::vector<StateIdx>& starts, const Rat& eps,
                        PlasterReport* report) {
  return plaster_core(l.mdp, l.sibling, starts, eps, report);
}

Strategy plaster_parity(const ExplicitMdp& m, const std::vector<StateIdx>& starts, const Rat& eps,
                        PlasterReport* report) {
  return plaster_core(m, {}, starts, eps, report);
}

UrchinResult sea_urchin_rounds(const LayeredMdp& l, const std::vector<StateIdx>& starts,
                               int rounds, const UrchinConfig& cfg) {
  const ExplicitMdp& base = l.mdp;
  if (starts.empty()) throw InputError("sea_urchin_rounds: start set must be nonempty");
  for (StateIdx s : starts)
    if (s < 0 || s >= base.size())
      throw InputError("sea_urchin_rounds: start index out of range");
  if (rounds < 1) throw InputError("sea_urchin_rounds: round count must be positive");
  if (!(cfg.gamma.sign() > 0 && cfg.gamma < cfg.beta && cfg.beta < cfg.alpha &&
        cfg.alpha < Rat(1)))
    throw InputError("sea_urchin_rounds: thresholds must satisfy 0 < gamma < beta < alpha < 1");

  {
    const auto rep = solve_parity(base);
    for (StateIdx s = 0; s < base.size(); ++s)
      if (rep.exact[static_cast<size_t>(s)] != Rat(1)) throw not_almost_sure(base.at(s).id);
  }

  const auto origin = widen(starts, l.sibling);
  const size_t full = reachable(base, origin).size();
  const Rat retain = (cfg.alpha - cfg.beta) / (Rat(1) - cfg.beta);

  UrchinResult res;
  ExplicitMdp cur = base;
  std::vector<StateIdx> fixed_region;
  std::vector<StateIdx> cores;  // accumulated spike cores, reachability targets
  std::vector<StateIdx> choice(base.states.size(), -1);
  std::vector<char> frozen(base.states.size(), 0);
  std::vector<Rat> prev_p(starts.size(), Rat(0));
  uint64_t radius = 0;

  for (int r = 1; r <= rounds; ++r) {
    const Rat err = Rat::pow2(-(r + cfg.err_shift));
    std::vector<Rat> want;
    want.reserve(starts.size());
    for (const Rat& p : prev_p) want.push_back(p + (Rat(1) - p) / 2);

    // accepted candidate of the radius sweep
    std::vector<StateIdx> w_set, env, spike, core_new, cores_cand, fix_cand;
    std::vector<StateIdx> cand_choice;
    std::vector<Rat> p_now;

    for (;;) {
      if (cfg.max_radius && radius > *cfg.max_radius) {
        std::string ach;
        for (const Rat& p : prev_p) ach += (ach.empty() ? "" : ", ") + p.str();
        throw radius_exhausted("round " + std::to_string(r) + " exceeded the radius cap " +
                               std::to_string(*cfg.max_radius) + "; reached p = [" + ach + "]");
      }
      const Bubble bub = bubble(base, origin, radius);
      w_set.clear();
      for (const auto& id : bub.members) w_set.push_back(base.find(id));
      std::sort(w_set.begin(), w_set.end());
      for (StateIdx s : w_set)
        if (!in_sorted(w_set, l.sibling[static_cast<size_t>(s)]))
          throw CheckFailure("sea_urchin_rounds: bubble is not sibling-closed at '" +
                             base.at(s).id + "'");

      const auto fix_wide = widen(fixed_region, l.sibling);

      // spikes: high-attainment regions for parity restricted to the unfrozen
      // part of the bubble
      ExplicitMdp enc = cur;
      for (StateIdx s = 0; s < enc.size(); ++s)
        if (!in_sorted(w_set, s) || in_sorted(fix_wide, s)) absorb(enc, s, 1);
      const Strategy spike_strat = plaster_core(enc, l.sibling, {}, err, nullptr);

      env = safe_set(enc, &spike_strat, Objective::parity(), cfg.gamma).members;
      spike = safe_set(enc, &spike_strat, Objective::parity(), cfg.beta).members;
      core_new = safe_set(enc, &spike_strat, Objective::parity(), cfg.alpha).members;
      for (StateIdx s : env)
        if (in_sorted(fix_wide, s))
          throw CheckFailure("sea_urchin_rounds: gamma-level set touches the widened frozen "
                             "region at '" +
                             base.at(s).id + "'");

      cand_choice = choice;
      const auto bc = choices_of_md(enc, spike_strat);
      for (StateIdx s : spike)
        if (cur.at(s).controlled) cand_choice[static_cast<size_t>(s)] = bc[static_cast<size_t>(s)];

      cores_cand = sorted_union(cores, core_new);

      // route the rest of the bubble towards the accumulated cores without
      // leaving it
      ExplicitMdp enc2 = cur;
      for (StateIdx s = 0; s < enc2.size(); ++s)
        if (!in_sorted(w_set, s)) absorb(enc2, s, 1);
      const auto rr = solve_reach(enc2, cores_cand);
      const auto rc = choices_of_md(enc2, *rr.witness);
      for (StateIdx s : w_set)
        if (cur.at(s).controlled && cand_choice[static_cast<size_t>(s)] < 0)
          cand_choice[static_cast<size_t>(s)] = rc[static_cast<size_t>(s)];

      fix_cand = sorted_union(sorted_union(fixed_region, spike), w_set);
      const auto inmask = mask_of(base, fix_cand);
      const ExplicitMdp eval = frozen_chain(cur, inmask, cand_choice);
      const auto pv = chain_parity(eval);
      p_now.clear();
      for (StateIdx s : starts) p_now.push_back(pv[static_cast<size_t>(s)]);

      bool ok = true;
      for (size_t i = 0; i < p_now.size(); ++i) ok = ok && p_now[i] >= want[i];
      if (ok) break;

      if (w_set.size() == full) {
        std::string ach;
        for (const Rat& p : p_now) ach += (ach.empty() ? "" : ", ") + p.str();
        throw radius_exhausted("round " + std::to_string(r) +
                               " saturated the reachable space at radius " +
                               std::to_string(radius) + "; reached p = [" + ach + "]");
      }
      ++radius;
    }

    // spike cores keep their spike with the threshold-gap probability
    const auto spikemask = mask_of(base, spike);
    const ExplicitMdp stay = frozen_chain(cur, spikemask, cand_choice);
    const auto stayp = chain_stay(stay, spikemask);
    for (StateIdx s : core_new)
      if (stayp[static_cast<size_t>(s)] < retain)
        throw CheckFailure("sea_urchin_rounds: spike core '" + base.at(s).id + "' keeps only " +
                           stayp[static_cast<size_t>(s)].str() + " of its spike");

    std::vector<StateIdx> fresh;
    for (StateIdx s : fix_cand)
      if (base.at(s).controlled && !frozen[static_cast<size_t>(s)]) {
        frozen[static_cast<size_t>(s)] = 1;
        fresh.push_back(s);
      }
    cur = fix_strategy(cur, partial_md(base, cand_choice, fresh), fresh);
    choice = cand_choice;
    fixed_region = fix_cand;
    cores = cores_cand;

    const Rat floor = Rat(1) - Rat::pow2(-r);
    for (size_t i = 0; i < p_now.size(); ++i)
      if (p_now[i] < floor)
        throw CheckFailure("sea_urchin_rounds: p after round " + std::to_string(r) + " is " +
                           p_now[i].str() + " < " + floor.str());
    prev_p = p_now;

    UrchinRoundInfo info;
    info.round = r;
    info.radius = radius;
    info.bubble = w_set;
    info.envelope = env;
    info.spike = spike;
    info.spike_core = core_new;
    info.p = p_now;
    res.rounds.push_back(std::move(info));
  }

  std::vector<StateIdx> frozen_list;
  for (StateIdx s = 0; s < base.size(); ++s)
    if (frozen[static_cast<size_t>(s)]) frozen_list.push_back(s);
  res.fixed = std::move(cur);
  res.partial = partial_md(base, choice, frozen_list);
  res.fixed_region = fixed_region;
  res.p = prev_p;
  return res;
}

Strategy optimal_parity_1bit(const ExplicitMdp& m, const AsEngine& engine, OneBitReport* report) {
  const LayeredMdp lay = layer(m);
  const auto lrep = solve_parity(lay.mdp);
  const auto& lvals = lrep.exact;

  bool any_positive = false;
  for (const auto& v : lvals) any_positive = any_positive || !v.is_zero();

  Strategy tau;
  if (!any_positive) {
    tau = md_from_choices(lay.mdp, std::vector<StateIdx>(lay.mdp.states.size(), -1));
  } else {
    const ExplicitMdp star = condition(lay.mdp, Objective::parity());
    const Strategy sig_star = uniformize_as(star, Objective::parity(), engine);
    const auto sc = choices_of_md(star, sig_star);
    std::vector<StateIdx> choice(lay.mdp.states.size(), -1);
    for (StateIdx j = 0; j < star.size(); ++j) {
      if (!star.at(j).controlled || sc[static_cast<size_t>(j)] < 0) continue;
      const StateIdx i = lay.mdp.find(star.at(j).id);
      choice[static_cast<size_t>(i)] = lay.mdp.find(star.at(sc[static_cast<size_t>(j)]).id);
    }
    tau = md_from_choices(lay.mdp, choice);
  }

  const auto att_layer = md_attainment(lay.mdp, tau, Objective::parity());
  for (StateIdx s = 0; s < lay.mdp.size(); ++s)
    if (att_layer[static_cast<size_t>(s)] != lvals[static_cast<size_t>(s)])
      throw CheckFailure("optimal_parity_1bit: layered attainment " +
                         att_layer[static_cast<size_t>(s)].str() + " != value " +
                         lvals[static_cast<size_t>(s)].str() + " at '" + lay.mdp.at(s).id + "'");

  Strategy u = unlayer_strategy(lay, tau);

  const auto mrep = solve_parity(m);
  OneBitReport local;
  OneBitReport& rep = report ? *report : local;
  rep = OneBitReport{};
  rep.value = mrep.exact;
  for (int b = 0; b < 2; ++b) {
    Strategy ub = u;
    ub.m0.bits = b ? "1" : "0";
    ub.invalidate_lookup();
    const auto ic = induce_chain(m, ub, all_states(m));
    const auto cv = chain_values(ic, Objective::parity());
    auto& out = b ? rep.attain_bit1 : rep.attain_bit0;
    for (StateIdx s = 0; s < m.size(); ++s) {
      const Rat a = cv[static_cast<size_t>(ic.product(ub.m0, s))];
      out.push_back(a);
      if (a != mrep.exact[static_cast<size_t>(s)])
        throw CheckFailure("optimal_parity_1bit: attainment " + a.str() + " with initial bit " +
                           std::to_string(b) + " != value " +
                           mrep.exact[static_cast<size_t>(s)].str() + " at '" + m.at(s).id + "'");
    }
  }
  return u;
}

}  // namespace pf
