#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "parity_forge/mdp.hpp"

namespace pf {

enum class StratClass { MD, Markov, KBit, KBitMarkov, GeneralFinite };

std::string to_string(StratClass c);
StratClass strat_class_from_string(const std::string& s);

// Memory mode. MD: both fields empty. Markov: step only. k-bit: bits only
// (a 0/1 string of length k). k-bit Markov: both. GeneralFinite reuses `bits`
// as a free-form tag.
struct Mode {
  std::optional<uint64_t> step;
  std::optional<std::string> bits;

  friend auto operator<=>(const Mode&, const Mode&) = default;
  std::string str() const;
};

// Deterministic strategy in memory-update form. One row per (mode, state) for
// controlled states: pick `to`, switch to mode `m2`. One row per
// (mode, state, observed successor) for random states: switch to `m2` when the
// environment resolves to `to`. Missing random rows default to "keep bits,
// advance the step" so update functions are total.
struct Strategy {
  struct Row {
    Mode m;
    std::string s;
    std::string to;
    Mode m2;
  };

  StratClass cls = StratClass::MD;
  int k = 0;  // bit width for the k-bit classes
  Mode m0;
  std::optional<uint64_t> horizon;
  std::optional<std::string> default_rule;  // name of an MD rule applied past the horizon
  std::vector<Row> table;                   // serialization order is authoritative

  const Row* controlled_row(const Mode& m, const std::string& s) const;
  const Row* random_row(const Mode& m, const std::string& s, const std::string& to) const;
  void invalidate_lookup();

  // Containment re-tags: MD embeds into every other class losslessly.
  Strategy as_class(StratClass target, int bits_width = 0) const;

 private:
  mutable std::map<std::tuple<Mode, std::string>, size_t> by_ms_;
  mutable std::map<std::tuple<Mode, std::string, std::string>, size_t> by_mst_;
  mutable bool indexed_ = false;
  void index() const;
};

// Problems the class tag implies (Markov steps increment, bit widths, MD mode
// shape). Report-style like validate().
std::vector<std::string> check_class_invariants(const Strategy& s);

// Canonical MD strategy from a choice vector (entry ignored for random
// states; -1 means "lowest-index successor").
Strategy md_from_choices(const ExplicitMdp& m, const std::vector<StateIdx>& choice);

// Extract the per-state choice of an MD strategy; -1 for states without a row.
std::vector<StateIdx> choices_of_md(const ExplicitMdp& m, const Strategy& s);

struct InducedChain {
  ExplicitMdp chain;  // zero controlled states; color of (m,s) = color(s)
  std::vector<std::pair<Mode, StateIdx>> origin;  // chain index -> (mode, source state)
  bool used_default_rule = false;

  StateIdx product(const Mode& m, StateIdx s) const;
  std::map<std::pair<Mode, StateIdx>, StateIdx> product_index;
};

// Finite Markov chain over (mode, state) pairs reachable from
// {(m0, s) : s in from}. Step components saturate at the horizon once a
// default rule takes over, keeping the chain finite.
InducedChain induce_chain(const ExplicitMdp& m, const Strategy& sigma,
                          const std::vector<StateIdx>& from);

// M[sigma, region]: controlled states in the region become random with the
// Dirac distribution sigma(s). sigma must be MD.
ExplicitMdp fix_strategy(const ExplicitMdp& m, const Strategy& sigma,
                         const std::vector<StateIdx>& region);

struct PartialRun {
  std::vector<StateIdx> states;  // chain indices
  bool induced_by_strategy = true;
};

PartialRun sample_run(const InducedChain& chain, StateIdx start, uint64_t steps, uint64_t seed);

}  // namespace pf
