#include <doctest.h>

#include <parity_forge/errors.hpp>
#include <parity_forge/strategy.hpp>

#include "test_util.hpp"

using namespace pf;
using pftest::eval_strategy;

namespace {

// controlled s can stall (self-loop) or commit to the coin; the coin settles
// into win/lose loops
ExplicitMdp stall_or_commit() {
  ExplicitMdp m;
  const StateIdx s = m.add_state("s", true, 0);
  const StateIdx coin = m.add_state("coin", false, 0);
  const StateIdx w = m.add_state("w", false, 2);
  const StateIdx l = m.add_state("l", false, 1);
  m.at(s).succ = {{s, Rat(1)}, {coin, Rat(1)}};
  m.at(coin).succ = {{w, Rat(1, 2)}, {l, Rat(1, 2)}};
  m.at(w).succ = {{w, Rat(1)}};
  m.at(l).succ = {{l, Rat(1)}};
  m.initial = {s};
  return m;
}

}  // namespace

TEST_CASE("strategy: class tags round trip through strings") {
  for (StratClass c : {StratClass::MD, StratClass::Markov, StratClass::KBit,
                       StratClass::KBitMarkov, StratClass::GeneralFinite})
    CHECK(strat_class_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(strat_class_from_string("bogus"), InputError);
}

TEST_CASE("strategy: mode rendering is stable") {
  CHECK(Mode{}.str() == "");
  CHECK(Mode{2, std::nullopt}.str() == "s=2");
  CHECK(Mode{std::nullopt, "01"}.str() == "b=01");
  CHECK(Mode{2, "01"}.str() == "s=2,b=01");
}

TEST_CASE("strategy: md_from_choices defaults to the lowest-ranked successor") {
  const ExplicitMdp m = stall_or_commit();
  const Strategy s = md_from_choices(m, std::vector<StateIdx>(m.states.size(), -1));
  REQUIRE(s.table.size() == 1);
  CHECK(s.table[0].s == "s");
  CHECK(s.table[0].to == "s");  // index 0 beats index 1
  const auto back = choices_of_md(m, s);
  CHECK(back[0] == 0);
  CHECK(back[1] == -1);  // random states carry no choice
}

TEST_CASE("strategy: explicit choices are validated against the edge set") {
  const ExplicitMdp m = stall_or_commit();
  std::vector<StateIdx> choice(m.states.size(), -1);
  choice[0] = m.find("coin");
  const Strategy s = md_from_choices(m, choice);
  CHECK(choices_of_md(m, s)[0] == m.find("coin"));

  choice[0] = m.find("w");  // not a successor of s
  CHECK_THROWS_AS(md_from_choices(m, choice), InputError);
}

TEST_CASE("strategy: md rows answer lookups from richer modes") {
  const ExplicitMdp m = stall_or_commit();
  std::vector<StateIdx> choice(m.states.size(), -1);
  choice[0] = m.find("coin");
  const Strategy s = md_from_choices(m, choice);
  // wildcard relaxation: the mode-free row serves stepped and bitted modes
  CHECK(s.controlled_row(Mode{}, "s") != nullptr);
  CHECK(s.controlled_row(Mode{3, std::nullopt}, "s") != nullptr);
  CHECK(s.controlled_row(Mode{std::nullopt, "0"}, "s") != nullptr);
  CHECK(s.controlled_row(Mode{7, "101"}, "s") != nullptr);
  CHECK(s.controlled_row(Mode{}, "coin") == nullptr);
}

TEST_CASE("strategy: as_class re-tags an md strategy without changing behavior") {
  const ExplicitMdp m = stall_or_commit();
  std::vector<StateIdx> choice(m.states.size(), -1);
  choice[0] = m.find("coin");
  const Strategy md = md_from_choices(m, choice);
  const auto base = eval_strategy(m, md, Objective::parity());

  const Strategy mk = md.as_class(StratClass::Markov);
  CHECK(mk.m0.step == 0);
  CHECK(check_class_invariants(mk).empty());
  const auto mkv = eval_strategy(m, mk, Objective::parity());

  const Strategy kb = md.as_class(StratClass::KBit, 2);
  CHECK(kb.k == 2);
  CHECK(kb.m0.bits == std::string("00"));
  CHECK(check_class_invariants(kb).empty());
  const auto kbv = eval_strategy(m, kb, Objective::parity());

  const Strategy kbm = md.as_class(StratClass::KBitMarkov, 1);
  CHECK(kbm.m0.step == 0);
  CHECK(kbm.m0.bits == std::string("0"));
  CHECK(check_class_invariants(kbm).empty());
  const auto kbmv = eval_strategy(m, kbm, Objective::parity());

  for (size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i] == mkv[i]);
    CHECK(base[i] == kbv[i]);
    CHECK(base[i] == kbmv[i]);
  }

  CHECK_THROWS_AS(mk.as_class(StratClass::KBit, 1), InputError);
}

TEST_CASE("strategy: class invariants catch malformed tables") {
  Strategy s;
  s.cls = StratClass::Markov;
  s.m0 = Mode{};  // missing step
  s.table.push_back({Mode{0, std::nullopt}, "a", "b", Mode{2, std::nullopt}});  // skips a step
  const auto issues = check_class_invariants(s);
  CHECK(issues.size() >= 2);

  Strategy k;
  k.cls = StratClass::KBit;
  k.k = 2;
  k.m0 = Mode{std::nullopt, "0"};  // wrong width
  CHECK(!check_class_invariants(k).empty());

  Strategy ok;
  ok.cls = StratClass::MD;
  ok.table.push_back({Mode{}, "a", "b", Mode{}});
  CHECK(check_class_invariants(ok).empty());
}

TEST_CASE("strategy: markov table plays out step by step and saturates") {
  const ExplicitMdp m = stall_or_commit();
  Strategy s;
  s.cls = StratClass::Markov;
  s.m0 = Mode{0, std::nullopt};
  // stall once, then commit
  s.table.push_back({Mode{0, std::nullopt}, "s", "s", Mode{1, std::nullopt}});
  s.table.push_back({Mode{1, std::nullopt}, "s", "coin", Mode{2, std::nullopt}});
  REQUIRE(check_class_invariants(s).empty());

  const auto ic = induce_chain(m, s, {0});
  // product states: (s,0) (s,1) (coin,2) then (w,3)/(l,3) at the saturation
  // bound, which loop in place
  CHECK(ic.chain.size() == 5);
  CHECK(ic.product(Mode{0, std::nullopt}, 0) >= 0);
  CHECK(ic.product(Mode{1, std::nullopt}, 0) >= 0);
  CHECK(ic.product(Mode{2, std::nullopt}, 0) == -1);
  const auto v = chain_values(ic, Objective::parity());
  CHECK(v[static_cast<size_t>(ic.product(s.m0, 0))] == Rat(1, 2));
}

TEST_CASE("strategy: horizon escape and the lowest default rule") {
  ExplicitMdp m = stall_or_commit();
  m.at(0).color = 1;  // stalling forever now loses
  Strategy s;
  s.cls = StratClass::Markov;
  s.m0 = Mode{0, std::nullopt};
  s.horizon = 1;
  s.table.push_back({Mode{0, std::nullopt}, "s", "s", Mode{1, std::nullopt}});

  // past the horizon with no rule: refuse
  CHECK_THROWS_AS(induce_chain(m, s, {0}), PreconditionError);

  // with the rule: the lowest-ranked successor is s itself, so the play
  // stalls forever and loses
  s.default_rule = "lowest";
  const auto ic = induce_chain(m, s, {0});
  CHECK(ic.used_default_rule);
  const auto v = chain_values(ic, Objective::parity());
  CHECK(v[static_cast<size_t>(ic.product(s.m0, 0))] == Rat(0));

  s.default_rule = "median";
  CHECK_THROWS_AS(induce_chain(m, s, {0}), InputError);
}

TEST_CASE("strategy: a missing reachable row is an undefined choice") {
  const ExplicitMdp m = stall_or_commit();
  Strategy s;
  s.cls = StratClass::MD;  // empty table
  CHECK_THROWS_AS(induce_chain(m, s, {0}), PreconditionError);
  try {
    induce_chain(m, s, {0});
  } catch (const PreconditionError& e) {
    CHECK(e.kind == "UndefinedChoice");
  }
  // starting where the gap is unreachable is fine
  const auto ic = induce_chain(m, s, {m.find("w")});
  CHECK(ic.chain.size() == 1);
}

TEST_CASE("strategy: random rows update bits, absent rows keep them") {
  const ExplicitMdp m = stall_or_commit();
  Strategy s;
  s.cls = StratClass::KBit;
  s.k = 1;
  s.m0 = Mode{std::nullopt, "0"};
  s.table.push_back({Mode{std::nullopt, "0"}, "s", "coin", Mode{std::nullopt, "0"}});
  s.table.push_back({Mode{std::nullopt, "1"}, "s", "coin", Mode{std::nullopt, "1"}});
  // flip the bit only when the coin resolves to w
  s.table.push_back({Mode{std::nullopt, "0"}, "coin", "w", Mode{std::nullopt, "1"}});

  const auto ic = induce_chain(m, s, {0});
  CHECK(ic.product(Mode{std::nullopt, "1"}, m.find("w")) >= 0);  // flipped
  CHECK(ic.product(Mode{std::nullopt, "0"}, m.find("l")) >= 0);  // kept
  CHECK(ic.product(Mode{std::nullopt, "1"}, m.find("l")) == -1);
}

TEST_CASE("strategy: parallel resolutions merging on one product state add up") {
  ExplicitMdp m;
  const StateIdx r = m.add_state("r", false, 0);
  const StateIdx w = m.add_state("w", false, 2);
  const StateIdx l = m.add_state("l", false, 1);
  m.at(r).succ = {{w, Rat(1, 3)}, {l, Rat(2, 3)}};
  m.at(w).succ = {{w, Rat(1)}};
  m.at(l).succ = {{w, Rat(1)}};
  m.initial = {r};
  // both resolutions map to mode-free w eventually; no merging needed at r,
  // but w is reached via two paths and must be interned once
  Strategy s;
  s.cls = StratClass::MD;
  const auto ic = induce_chain(m, s, {0});
  CHECK(ic.chain.size() == 3);
  const auto v = chain_values(ic, Objective::parity());
  CHECK(v[static_cast<size_t>(ic.product(Mode{}, 0))] == Rat(1));
}

TEST_CASE("strategy: fix_strategy rewires exactly the region") {
  const ExplicitMdp m = stall_or_commit();
  std::vector<StateIdx> choice(m.states.size(), -1);
  choice[0] = m.find("coin");
  const Strategy s = md_from_choices(m, choice);

  const ExplicitMdp fixed = fix_strategy(m, s, {0, 1});
  CHECK(!fixed.at(0).controlled);
  REQUIRE(fixed.at(0).succ.size() == 1);
  CHECK(fixed.at(0).succ[0].to == m.find("coin"));
  CHECK(fixed.at(0).succ[0].p == Rat(1));
  // the random state in the region is untouched
  CHECK(fixed.at(1).succ.size() == 2);
  // outside the region nothing changes
  CHECK(fixed.at(2).succ.size() == 1);

  CHECK_THROWS_AS(fix_strategy(m, s, {99}), InputError);
  Strategy gap;
  gap.cls = StratClass::MD;
  CHECK_THROWS_AS(fix_strategy(m, gap, {0}), PreconditionError);
  CHECK_THROWS_AS(fix_strategy(m, s.as_class(StratClass::Markov), {0}), InputError);
}

TEST_CASE("strategy: sampled runs are reproducible and follow edges") {
  const ExplicitMdp m = stall_or_commit();
  std::vector<StateIdx> choice(m.states.size(), -1);
  choice[0] = m.find("coin");
  const Strategy s = md_from_choices(m, choice);
  const auto ic = induce_chain(m, s, {0});
  const StateIdx start = ic.product(s.m0, 0);

  const auto run1 = sample_run(ic, start, 12, 7);
  const auto run2 = sample_run(ic, start, 12, 7);
  CHECK(run1.states == run2.states);
  REQUIRE(run1.states.size() == 13);
  for (size_t i = 0; i + 1 < run1.states.size(); ++i) {
    bool edge = false;
    for (const auto& e : ic.chain.at(run1.states[i]).succ)
      edge = edge || e.to == run1.states[i + 1];
    CHECK(edge);
  }
  CHECK_THROWS_AS(sample_run(ic, -1, 3, 1), InputError);
}
