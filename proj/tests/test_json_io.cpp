#include <doctest.h>

#include <cstdio>

#include <parity_forge/errors.hpp>
#include <parity_forge/json_io.hpp>

#include "test_util.hpp"

using namespace pf;
using pftest::build_family;
using pftest::random_mdp;

TEST_CASE("json: mdp round trip is byte exact") {
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    const ExplicitMdp m = random_mdp(seed, 9, {0, 1, 2, 3});
    const ojson j = mdp_to_json(m);
    const ExplicitMdp back = mdp_from_json(j);
    CHECK(dump_json(mdp_to_json(back)) == dump_json(j));
    CHECK(back.size() == m.size());
    CHECK(back.initial == m.initial);
  }

  const ExplicitMdp f = build_family("fig3");
  const ojson j = mdp_to_json(f);
  CHECK(j["states"][0]["id"] == "a");
  CHECK(j["states"][0]["kind"] == "controlled");
  CHECK(!j["states"][0]["succ"][0].contains("p"));  // controlled edges carry no mass
  CHECK(j["states"][1]["succ"][0]["p"] == "1/2");
  CHECK(j["initial"][0] == "a");
  CHECK(dump_json(mdp_to_json(mdp_from_json(j))) == dump_json(j));
}

TEST_CASE("json: parse then dump is the identity on serialized models") {
  const std::string text = dump_json(mdp_to_json(build_family("as_win_walk")));
  CHECK(dump_json(parse_json(text)) == text);
}

TEST_CASE("json: malformed models are rejected with precise messages") {
  using doctest::Contains;
  const ojson good = mdp_to_json(build_family("fig3"));

  ojson missing = good;
  missing.erase("initial");
  CHECK_THROWS_WITH_AS(mdp_from_json(missing), Contains("missing key"), InputError);

  ojson stray = good;
  stray["extras"] = 1;
  CHECK_THROWS_WITH_AS(mdp_from_json(stray), Contains("unknown key"), InputError);

  ojson badkind = good;
  badkind["states"][0]["kind"] = "chance";
  CHECK_THROWS_WITH_AS(mdp_from_json(badkind), Contains("kind"), InputError);

  ojson floatp = good;
  floatp["states"][1]["succ"][0]["p"] = 0.5;
  CHECK_THROWS_WITH_AS(mdp_from_json(floatp), Contains("strings"), InputError);

  ojson junk = good;
  junk["states"][1]["succ"][0]["p"] = "one half";
  CHECK_THROWS_WITH_AS(mdp_from_json(junk), Contains("cannot parse"), InputError);

  ojson dangling = good;
  dangling["states"][0]["succ"][0]["to"] = "nowhere";
  CHECK_THROWS_WITH_AS(mdp_from_json(dangling), Contains("not a state"), InputError);

  ojson badinit = good;
  badinit["initial"][0] = "nowhere";
  CHECK_THROWS_WITH_AS(mdp_from_json(badinit), Contains("initial"), InputError);

  CHECK_THROWS_AS(parse_json("{ not json"), InputError);
}

TEST_CASE("json: strategy round trip keeps every row and tag") {
  Strategy s;
  s.cls = StratClass::KBitMarkov;
  s.k = 2;
  s.m0.step = 0;
  s.m0.bits = "00";
  s.horizon = 12;
  s.default_rule = "lowest";
  Strategy::Row row;
  row.m.step = 0;
  row.m.bits = "01";
  row.s = "a";
  row.to = "b";
  row.m2.step = 1;
  row.m2.bits = "11";
  s.table.push_back(row);

  const ojson j = strategy_to_json(s);
  CHECK(j["class"] == "kbit-markov");
  CHECK(j["k"] == 2);
  CHECK(j["horizon"] == 12);
  const Strategy back = strategy_from_json(j);
  CHECK(back.cls == s.cls);
  CHECK(back.k == 2);
  CHECK(back.m0.step == 0);
  CHECK(back.m0.bits == "00");
  CHECK(back.horizon == 12);
  CHECK(back.default_rule == "lowest");
  REQUIRE(back.table.size() == 1);
  CHECK(back.table[0].m.bits == "01");
  CHECK(back.table[0].m2.step == 1);
  CHECK(dump_json(strategy_to_json(back)) == dump_json(j));
}

TEST_CASE("json: md strategies serialize without class clutter") {
  const ExplicitMdp f = build_family("fig3");
  const auto rep = solve_parity(f);
  REQUIRE(rep.witness.has_value());
  const ojson j = strategy_to_json(*rep.witness);
  CHECK(j["class"] == "md");
  CHECK(!j.contains("k"));
  CHECK(!j.contains("horizon"));
  const Strategy back = strategy_from_json(j);
  const auto before = pftest::eval_strategy(f, *rep.witness, Objective::parity());
  const auto after = pftest::eval_strategy(f, back, Objective::parity());
  CHECK(before == after);
}

TEST_CASE("json: strategies violating their class are rejected on load") {
  ojson j;
  j["class"] = "markov";
  j["m0"] = ojson::object();  // a markov strategy needs m0.step
  j["table"] = ojson::array();
  CHECK_THROWS_AS(strategy_from_json(j), InputError);

  ojson bits;
  bits["class"] = "md";
  bits["m0"] = ojson::object();
  bits["table"] = ojson::array();
  ojson row;
  row["m"] = {{"bits", "02"}};  // not a 0/1 string
  row["s"] = "a";
  row["to"] = "b";
  row["m2"] = ojson::object();
  bits["table"].push_back(row);
  CHECK_THROWS_AS(strategy_from_json(bits), InputError);
}

TEST_CASE("json: objective round trip resolves state ids") {
  const ExplicitMdp f = build_family("fig3");
  const Objective o = Objective::reach({f.find("c"), f.find("d")});
  const ojson j = objective_to_json(o, f);
  CHECK(j["kind"] == "reach");
  CHECK(j["target"] == ojson::array({"c", "d"}));
  const Objective back = objective_from_json(j, f);
  CHECK(back.kind == Objective::Kind::reach);
  CHECK(back.target == o.target);

  const ojson par = objective_to_json(Objective::parity(), f);
  CHECK(!par.contains("target"));
  CHECK(objective_from_json(par, f).kind == Objective::Kind::parity);

  ojson bad = j;
  bad["target"][0] = "nowhere";
  CHECK_THROWS_AS(objective_from_json(bad, f), InputError);
  bad = j;
  bad["kind"] = "busy";
  CHECK_THROWS_AS(objective_from_json(bad, f), InputError);
}

TEST_CASE("json: exact value reports render rationals as strings") {
  const ExplicitMdp f = build_family("fig3");
  const auto rep = solve_parity(f);
  const ojson j = value_report_to_json(rep, f);
  CHECK(j["mode"] == "exact");
  CHECK(j["objective"]["kind"] == "parity");
  CHECK(j["values"]["a"] == "1/2");
  CHECK(j["values"]["c"] == "1/1");
  CHECK(j["values"]["d"] == "0/1");
  CHECK(j.contains("witness"));
}

TEST_CASE("json: float value reports render certified interval pairs") {
  const ExplicitMdp f = build_family("fig3");
  const auto rep = solve_parity(f, NumMode::floating, 1e-9);
  const ojson j = value_report_to_json(rep, f);
  CHECK(j["mode"] == "float");
  CHECK(!j.contains("witness"));
  const auto& va = j["values"]["a"];
  REQUIRE(va.is_array());
  REQUIRE(va.size() == 2);
  const double lo = va[0].get<double>();
  const double hi = va[1].get<double>();
  CHECK(lo <= 0.5);
  CHECK(0.5 <= hi);
  CHECK(hi - lo <= 1e-9);
}

TEST_CASE("json: check reports carry per-item verdicts") {
  ExplicitMdp c;
  c.add_state("u", false, 2);
  c.at(0).succ = {{0, Rat(1)}};
  c.initial = {0};
  const ojson j = check_report_to_json(check_levy(c));
  CHECK(j["suite"] == "levy");
  CHECK(j["pass"] == true);
  REQUIRE(j["items"].is_array());
  REQUIRE(j["items"].size() >= 4);
  for (const auto& item : j["items"]) {
    CHECK(item.contains("name"));
    CHECK(item["pass"] == true);
  }
}

TEST_CASE("json: file helpers write and read back") {
  const std::string path = "pf_test_roundtrip.json";
  const ojson j = mdp_to_json(build_family("fig3"));
  write_json_file(path, j);
  const ojson back = read_json_file(path);
  CHECK(back == j);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_json_file("definitely_missing_file.json"), InputError);
}
