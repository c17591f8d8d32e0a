#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "parity_forge/analysis.hpp"
#include "parity_forge/transform.hpp"

namespace pf {

// Uniformly eps-optimal MD strategy for avoiding `avoid`, on acyclic inputs.
// At a controlled state of rank r (0-based) the rule accepts any successor t
// with val(t) >= val(s) * (1 - eps * 2^-(r+1)) and picks the lowest-rank
// acceptable one. The 1-based exponent keeps the total slack budget
// sum_r 2^-(r+1) <= 1, which is what makes the multiplicative guarantee
// P(safety) >= val * (1 - eps) provable; it is re-checked exactly on every
// call. eps == 0 returns the exact-optimal witness instead.
Strategy safety_eps_md(const ExplicitMdp& m, const std::vector<StateIdx>& avoid, const Rat& eps);

// Reachability admits exact-optimal MD strategies on finite instances, so the
// eps parameter is only validated; the solver witness is returned as-is.
Strategy reach_eps_md(const ExplicitMdp& m, const std::vector<StateIdx>& target, const Rat& eps);

// Uniformly eps-optimal MD strategy for two-color (co-Buchi) instances.
// Parameters eps1 = eps2 = eps/4, k = 2/eps, lambda = eps1/(2k),
// tau1 = 1 - eps1, tau2 = 1 - eps1/k + lambda. Builds an exact-optimal
// safety strategy, freezes it on its tau1 safe set, routes the rest by an
// exact-optimal reachability strategy towards the tau2 value-safe set of the
// frozen MDP. Checks attainment >= val - eps and the sharper
// (val - eps1 - eps2)(1 - 1/k) bound exactly.
Strategy cobuchi_eps_md(const ExplicitMdp& m, const Rat& eps);

// Produces an MD strategy that almost-surely wins parity from every state.
// pre: colors within {0,1,2} and every state almost-surely winning (checked).
// Safety core at levels 1/3 and 2/3 of an exact-optimal avoid-nonzero-color
// strategy, plus almost-sure reachability of the 2/3 core and the color-2
// states in the frozen MDP.
Strategy as_win_012(const ExplicitMdp& m);

// Callback producing an MD strategy almost-surely winning from `s` in `sub`.
// The default engine takes the exact solver witness and rejects states whose
// value is below one.
using AsEngine = std::function<Strategy(const ExplicitMdp& sub, StateIdx s)>;

// Single MD strategy almost-surely winning from every state, stitched from
// per-region strategies: repeatedly pick the least state not yet covered,
// obtain an almost-surely winning MD strategy in the partially frozen MDP,
// and freeze it on the region reachable from that state.
// pre: every state almost-surely winning for obj (checked).
Strategy uniformize_as(const ExplicitMdp& m, const Objective& obj, const AsEngine& engine = {});

// Optimal MD strategy for three-color parity on finite instances: condition
// on the objective, stitch the almost-sure construction over the conditioned
// MDP, map the result back. Verified exactly optimal at every state.
Strategy parity012_opt_md(const ExplicitMdp& m);

struct PlasterRound {
  int color = 0;                     // even color handled in this round
  std::vector<StateIdx> high;        // restricted value >= alpha before freezing
  std::vector<StateIdx> fix;         // attainment >= beta under the round strategy
  std::vector<StateIdx> core;        // attainment >= alpha under the round strategy
  // per requested start: restricted value after freezing vs. val - e*gamma
  std::vector<Rat> floor_lhs, floor_rhs;
};

struct PlasterReport {
  Rat gamma, beta, alpha;
  int e_max = 0;
  bool exact_route = false;                // eps == 0 shortcut taken
  std::vector<std::pair<int, int>> recolor;  // densifying color remap, empty if unused
  std::vector<PlasterRound> rounds;
  std::vector<Rat> value;       // parity value per state
  std::vector<Rat> attainment;  // under the returned strategy
};

// Uniformly eps-optimal MD strategy for parity, built color by color:
// gamma = eps/(e_max+2), beta = 1-gamma, alpha = 1-gamma^2. For each even
// color e (ascending) solve the capped objective "stay within colors <= e,
// outside earlier frozen regions, and see e infinitely often", freeze the
// exact-optimal witness where it attains >= beta, then finish with an
// exact-optimal reachability strategy to the union of the >= alpha cores.
// After each round the frozen MDP is checked to still be within e*gamma of
// the original value from every requested start, each core state is checked
// to remain in its frozen region with probability >= (alpha-beta)/(1-beta),
// and runs that stay there are checked to win through color e surely.
// The sibling structure of `l` widens frozen regions to whole objects before
// they are excluded from later rounds; the ExplicitMdp overload uses the
// trivial structure. Colors are densified first when 0 occurs or even colors
// have gaps (order- and parity-preserving, recorded in the report).
Strategy plaster_parity(const LayeredMdp& l, const std::vector<StateIdx>& starts, const Rat& eps,
                        PlasterReport* report = nullptr);
Strategy plaster_parity(const ExplicitMdp& m, const std::vector<StateIdx>& starts, const Rat& eps,
                        PlasterReport* report = nullptr);

struct UrchinConfig {
  Rat alpha{9, 10};
  Rat beta{4, 5};
  Rat gamma{3, 5};
  int err_shift = 4;  // round-i spike synthesis uses eps = 2^-(i+err_shift)
  std::optional<uint64_t> max_radius;
};

struct UrchinRoundInfo {
  int round = 0;
  uint64_t radius = 0;
  std::vector<StateIdx> bubble;    // states within `radius` of the starts
  std::vector<StateIdx> envelope;  // attainment >= gamma under the spike strategy
  std::vector<StateIdx> spike;      // >= beta; spike strategy frozen here
  std::vector<StateIdx> spike_core;  // >= alpha; reachability targets
  std::vector<Rat> p;               // per start: P(win and stay frozen) after the round
};

struct UrchinResult {
  ExplicitMdp fixed;                    // input with the frozen choices resolved
  Strategy partial;                     // MD rows exactly at the frozen controlled states
  std::vector<StateIdx> fixed_region;   // sorted
  std::vector<Rat> p;                   // per start, after the last round
  std::vector<UrchinRoundInfo> rounds;
};

// Almost-sure parity strategy grown in rounds around the start set: each
// round synthesizes spikes (high-attainment regions for parity restricted to
// the unfrozen part, via plaster_parity at shrinking eps), freezes them at
// the beta level, and freezes an exact-optimal reachability strategy towards
// the accumulated spike cores on an enlarged bubble. The bubble radius is
// swept upward until P(win without leaving the frozen region) at least
// halves the remaining gap at every start; per-round checks: the gamma-level
// set avoids the widened frozen region, spike cores stay in their spike with
// probability >= (alpha-beta)/(1-beta), and p_i >= 1 - 2^-i.
// pre: every state almost-surely winning (checked); starts are widened to a
// sibling-closed set. Throws RadiusExhausted when the sweep saturates the
// instance (or max_radius) without meeting the halving target.
UrchinResult sea_urchin_rounds(const LayeredMdp& l, const std::vector<StateIdx>& starts,
                               int rounds, const UrchinConfig& cfg = {});

struct OneBitReport {
  std::vector<Rat> value;        // per source state
  std::vector<Rat> attain_bit0;  // under the strategy started with bit 0
  std::vector<Rat> attain_bit1;
};

// Optimal deterministic 1-bit strategy for parity on finite instances:
// layer, condition, stitch an almost-surely winning MD strategy over the
// conditioned layered MDP (engine as in uniformize_as), map back, unlayer.
// Verified to attain the exact value from every state for both initial bit
// settings.
Strategy optimal_parity_1bit(const ExplicitMdp& m, const AsEngine& engine = {},
                             OneBitReport* report = nullptr);

}  // namespace pf
