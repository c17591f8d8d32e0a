#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parity_forge/mdp.hpp"
#include "parity_forge/strategy.hpp"

namespace pf {

enum class NumMode { exact, floating };

struct Objective {
  enum class Kind { parity, reach, safety };
  Kind kind = Kind::parity;
  std::vector<StateIdx> target;  // reach/safety only, kept sorted

  static Objective parity() { return {}; }
  static Objective reach(std::vector<StateIdx> t);
  static Objective safety(std::vector<StateIdx> t);
  std::string describe(const ExplicitMdp& m) const;
};

// Per-state value. Exact mode carries rationals; float mode carries certified
// intervals [lo, hi] with hi - lo below the requested tolerance.
struct ValueReport {
  Objective objective;
  NumMode mode = NumMode::exact;
  std::vector<Rat> exact;
  std::vector<std::pair<double, double>> approx;
  std::optional<Strategy> witness;
};

struct SafeSet {
  Rat beta;
  bool strategy_flavor = false;
  std::vector<StateIdx> members;  // sorted
  bool contains(StateIdx s) const;
};

struct EcDecomposition {
  struct Mec {
    std::vector<StateIdx> states;  // sorted
    int max_color = 0;
    bool winning = false;                 // has a sub-EC with even max color
    std::vector<StateIdx> winning_core;   // that sub-EC (empty when losing)
  };
  std::vector<Mec> mecs;
  std::vector<int> mec_of;  // -1 when the state is in no MEC
};

// --- graph layer ---

std::vector<std::vector<StateIdx>> strongly_connected_components(const ExplicitMdp& m);
// bottom SCCs of a Markov chain (no controlled states required)
std::vector<std::vector<StateIdx>> bottom_sccs(const ExplicitMdp& chain);
EcDecomposition mec_decomposition(const ExplicitMdp& m);
// maximal end components of the sub-MDP induced by `region`
std::vector<std::vector<StateIdx>> max_end_components(const ExplicitMdp& m,
                                                      const std::vector<StateIdx>& region);

// Largest set of non-target states the controller can keep the run in surely
// (controlled: some successor inside, random: all successors inside).
std::vector<char> surely_safe_region(const ExplicitMdp& m, const std::vector<char>& bad);

// --- exact linear algebra ---

// Solves A x = b by fraction-preserving Gaussian elimination. Throws on a
// singular system.
std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b);

// --- chain layer (inputs must have zero controlled states) ---

std::vector<Rat> chain_reach(const ExplicitMdp& chain, const std::vector<char>& target);
// probability of staying in `good` forever
std::vector<Rat> chain_stay(const ExplicitMdp& chain, const std::vector<char>& good);
// probability that the run settles in `good` (finally-globally)
std::vector<Rat> chain_settle(const ExplicitMdp& chain, const std::vector<char>& good);
std::vector<Rat> chain_parity(const ExplicitMdp& chain);
std::vector<Rat> chain_values(const ExplicitMdp& chain, const Objective& obj);
// product-chain overload: reach/safety targets name source states and apply to
// every product copy of them
std::vector<Rat> chain_values(const InducedChain& ic, const Objective& obj);

// --- MDP solvers (exact: qualitative preprocessing + policy iteration with
// rational linear solves; float: interval value iteration on the MEC
// quotient). Witness strategies are optimal in exact mode. Tie-breaking:
// lowest-index maximizer everywhere. ---

ValueReport solve_reach(const ExplicitMdp& m, const std::vector<StateIdx>& target,
                        NumMode mode = NumMode::exact, double tol = 1e-9);
ValueReport solve_safety(const ExplicitMdp& m, const std::vector<StateIdx>& avoid,
                         NumMode mode = NumMode::exact, double tol = 1e-9);
ValueReport solve_parity(const ExplicitMdp& m, NumMode mode = NumMode::exact,
                         double tol = 1e-9);
ValueReport solve(const ExplicitMdp& m, const Objective& obj, NumMode mode = NumMode::exact,
                  double tol = 1e-9);

// Safe set per the two flavors: with a strategy, membership is
// P_{M,s,sigma}(obj) >= beta from initial mode m0; without, val(s) >= beta.
SafeSet safe_set(const ExplicitMdp& m, const Strategy* sigma, const Objective& obj,
                 const Rat& beta);

// --- zero-one law and measure-arithmetic checkers (exact, chains only) ---

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string details;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;
  bool pass() const {
    for (const auto& i : items)
      if (!i.pass) return false;
    return true;
  }
};

struct LevyParams {
  std::vector<std::pair<Rat, Rat>> beta_pairs{{Rat(1, 4), Rat(3, 4)},
                                              {Rat(1, 3), Rat(2, 3)},
                                              {Rat(1, 2), Rat(1)}};
  std::vector<Rat> betas{Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
  Rat eps{1, 10};        // level of the safe set swept toward in (c)
  Rat eps_prime{1, 20};  // allowed loss in (c) and (d)
  uint64_t n_cap = 128;
  int cyl_len = 3;
  size_t cyl_guard = 20000;
};

// Verifies, exactly and per state, on a finite chain with the parity objective:
//  (a) s in Safe(b2) implies P_s(G Safe(b1)) >= (b2-b1)/(1-b1)
//  (b) P_s(FG Safe(b) minus parity) = 0 and P_s(parity minus FG Safe(b)) = 0
//  (c) some n <= n_cap has P_s(parity and reaching Safe(1-eps) within n)
//      >= P_s(parity) - eps'
//  (d) with E' the event from (c): P(E' and R) >= P(E and R) - eps' for every
//      cylinder R up to cyl_len
// A failure signals a solver bug, never a refutation of the inequalities.
CheckReport check_levy(const ExplicitMdp& chain, const LevyParams& params = {});

}  // namespace pf
