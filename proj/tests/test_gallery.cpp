#include <doctest.h>

#include <parity_forge/errors.hpp>
#include <parity_forge/gallery.hpp>

#include "test_util.hpp"

using namespace pf;
using pftest::build_family;

TEST_CASE("gallery: catalog order is stable and documented") {
  const auto& cat = gallery_list();
  REQUIRE(cat.size() == 5);
  CHECK(cat[0].name == "ladder");
  CHECK(cat[1].name == "fig3");
  CHECK(cat[2].name == "walk");
  CHECK(cat[3].name == "as_win_walk");
  CHECK(cat[4].name == "acyclic_dag");
  for (const auto& doc : cat) CHECK(!doc.summary.empty());
  CHECK(cat[0].defaults == "p=1/2");
  CHECK(cat[2].defaults == "p=1/3");
  CHECK(cat[4].defaults == "n=12, seed=1");
}

TEST_CASE("gallery: every family materializes to a desk-sized window") {
  for (const auto& doc : gallery_list()) {
    CAPTURE(doc.name);
    const MdpModel model = gallery_build(doc.name);
    auto mat = materialize(model, 8, 32);
    CHECK(mat.mdp.size() >= 2);
    CHECK(mat.mdp.size() <= 500);
    if (mat.frontier.clean()) {
      CHECK(validate(mat.mdp).ok());
      // closed instances must also solve without tripping any internal check
      const auto rep = solve_parity(mat.mdp);
      CHECK(rep.exact.size() == static_cast<size_t>(mat.mdp.size()));
    } else {
      // the infinite families really are cut at this horizon
      CHECK((doc.name == "ladder" || doc.name == "walk"));
    }
  }
}

TEST_CASE("gallery: fig3 has the textbook values") {
  const ExplicitMdp f = build_family("fig3");
  REQUIRE(f.size() == 4);
  CHECK(f.at(f.find("a")).controlled);
  CHECK(!f.at(f.find("b")).controlled);
  CHECK(f.at(f.find("a")).color == 0);
  CHECK(f.at(f.find("b")).color == 1);
  CHECK(f.at(f.find("c")).color == 2);
  CHECK(f.at(f.find("d")).color == 1);

  const auto v = solve_parity(f).exact;
  CHECK(v[static_cast<size_t>(f.find("a"))] == Rat(1, 2));
  CHECK(v[static_cast<size_t>(f.find("b"))] == Rat(1, 2));
  CHECK(v[static_cast<size_t>(f.find("c"))] == Rat(1));
  CHECK(v[static_cast<size_t>(f.find("d"))] == Rat(0));
}

TEST_CASE("gallery: the walk window has the expected shape") {
  ojson params;
  params["p"] = "1/3";
  auto mat = materialize(gallery_build(FamilySpec{"walk", params}), 3, 4);
  const ExplicitMdp& m = mat.mdp;
  CHECK(m.size() == 7);
  for (int z = -3; z <= 3; ++z) {
    const StateIdx s = m.find("z" + std::to_string(z));
    REQUIRE(s >= 0);
    CHECK(m.at(s).color == (z == 0 ? 2 : 1));
    CHECK(!m.at(s).controlled);
  }
  std::vector<std::string> frontier = mat.frontier.frontier;
  std::sort(frontier.begin(), frontier.end());
  CHECK(frontier == std::vector<std::string>{"z-3", "z3"});
  const StateIdx z0 = m.find("z0");
  REQUIRE(m.at(z0).succ.size() == 2);
  CHECK(m.at(m.at(z0).succ[0].to).id == "z1");
  CHECK(m.at(z0).succ[0].p == Rat(1, 3));
  CHECK(m.at(z0).succ[1].p == Rat(2, 3));
}

TEST_CASE("gallery: ladder exits alternate colors and keep the geometric weights") {
  auto mat = materialize(gallery_build("ladder"), 1, 6);
  const ExplicitMdp& m = mat.mdp;
  CHECK(m.size() == 7);  // apex + exit0..5
  const StateIdx apex = m.find("apex");
  REQUIRE(apex >= 0);
  CHECK(m.at(apex).color == 0);
  for (int i = 0; i < 6; ++i) {
    const StateIdx e = m.find("exit" + std::to_string(i));
    REQUIRE(e >= 0);
    CHECK(m.at(e).color == (i % 2 == 0 ? 2 : 1));
  }
  CHECK(m.at(apex).succ[0].p == Rat(1, 2));
  CHECK(m.at(apex).succ[3].p == Rat(1, 16));
  REQUIRE(mat.frontier.residual.count("apex") == 1);
  CHECK(mat.frontier.residual.at("apex") == Rat(1, 64));
}

TEST_CASE("gallery: as_win_walk alternates control and wins everywhere") {
  ojson params;
  params["n"] = 6;
  const ExplicitMdp m = build_family("as_win_walk", params);
  REQUIRE(m.size() == 6);
  for (int i = 0; i < 6; ++i) {
    const StateIdx s = m.find("w" + std::to_string(i));
    REQUIRE(s == i);
    CHECK(m.at(s).controlled == (i % 2 == 1));
    CHECK(m.at(s).color == (i == 0 ? 2 : 1));
  }
  // interior random states split evenly, ends reflect
  CHECK(m.at(0).succ.size() == 1);
  CHECK(m.at(2).succ.size() == 2);
  CHECK(m.at(2).succ[0].p == Rat(1, 2));
  for (const Rat& v : solve_parity(m).exact) CHECK(v == Rat(1));
}

TEST_CASE("gallery: acyclic_dag is acyclic, seeded and reproducible") {
  const ExplicitMdp a = build_family("acyclic_dag");
  CHECK(a.size() == 10);  // the part of the 12+2 state DAG reachable from v0
  CHECK(a.find("goal") >= 0);
  CHECK(a.find("trap") >= 0);
  CHECK(is_acyclic(a));
  CHECK(validate(a).ok());

  ojson p1;
  p1["n"] = 9;
  p1["seed"] = 7;
  const ExplicitMdp b1 = build_family("acyclic_dag", p1);
  const ExplicitMdp b2 = build_family("acyclic_dag", p1);
  CHECK(mdp_to_json(b1) == mdp_to_json(b2));

  ojson p2 = p1;
  p2["seed"] = 8;
  const ExplicitMdp c = build_family("acyclic_dag", p2);
  CHECK(mdp_to_json(b1) != mdp_to_json(c));
}

TEST_CASE("gallery: parameter schema is enforced") {
  CHECK_THROWS_AS(gallery_build("no_such_family"), InputError);

  ojson stray;
  stray["whatever"] = 3;
  CHECK_THROWS_AS(gallery_build(FamilySpec{"fig3", stray}), InputError);

  ojson zero;
  zero["p"] = "0";
  CHECK_THROWS_AS(gallery_build(FamilySpec{"walk", zero}), InputError);
  CHECK_THROWS_AS(gallery_build(FamilySpec{"ladder", zero}), InputError);

  ojson both;
  both["p"] = "1/2";
  both["weights"] = ojson::array({"1/2", "1/2"});
  CHECK_THROWS_AS(gallery_build(FamilySpec{"ladder", both}), InputError);

  ojson short_sum;
  short_sum["weights"] = ojson::array({"1/2", "1/4"});
  CHECK_THROWS_AS(gallery_build(FamilySpec{"ladder", short_sum}), InputError);

  ojson tiny;
  tiny["n"] = 1;
  CHECK_THROWS_AS(gallery_build(FamilySpec{"as_win_walk", tiny}), InputError);
  CHECK_THROWS_AS(gallery_build(FamilySpec{"acyclic_dag", tiny}), InputError);
}

TEST_CASE("gallery: family json round trip") {
  ojson j;
  j["family"] = "walk";
  j["params"]["p"] = "1/4";
  REQUIRE(is_family_json(j));
  const FamilySpec spec = family_from_json(j);
  CHECK(spec.family == "walk");
  CHECK(spec.params.at("p") == "1/4");
  auto mat = materialize(gallery_build(spec), 1, 4);
  CHECK(mat.mdp.at(mat.mdp.find("z0")).succ[0].p == Rat(1, 4));

  ojson plain = mdp_to_json(build_family("fig3"));
  CHECK(!is_family_json(plain));
}
