#include "parity_forge/gallery.hpp"

#include <memory>
#include <set>

#include "parity_forge/errors.hpp"
#include "parity_forge/rng.hpp"

namespace pf {

namespace {

void check_params(const ojson& params, const std::set<std::string>& allowed,
                  const std::string& family) {
  for (auto it = params.begin(); it != params.end(); ++it)
    if (!allowed.count(it.key()))
      throw InputError("family '" + family + "': unknown parameter '" + it.key() + "'");
}

Rat rat_param(const ojson& params, const std::string& key, const Rat& dflt) {
  if (!params.contains(key)) return dflt;
  const auto& v = params[key];
  if (!v.is_string())
    throw InputError("parameter '" + key + "' must be a rational string like \"1/2\"");
  return Rat::parse(v.get<std::string>());
}

uint64_t nat_param(const ojson& params, const std::string& key, uint64_t dflt) {
  if (!params.contains(key)) return dflt;
  const auto& v = params[key];
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<int64_t>() < 0))
    throw InputError("parameter '" + key + "' must be a nonnegative integer");
  return v.get<uint64_t>();
}

MdpModel wrap(ExplicitMdp g) {
  return as_model(std::make_shared<const ExplicitMdp>(std::move(g)));
}

// apex with countably many exits; exit i carries weight p(1-p)^i, or the
// i-th entry of an explicit finite weight list. Even exits win.
MdpModel build_ladder(const ojson& params) {
  check_params(params, {"p", "weights"}, "ladder");
  if (params.contains("weights")) {
    if (params.contains("p")) throw InputError("family 'ladder': give either p or weights");
    const auto& w = params["weights"];
    if (!w.is_array() || w.empty())
      throw InputError("family 'ladder': weights must be a nonempty array of rational strings");
    std::vector<Rat> ws;
    Rat sum;
    for (const auto& v : w) {
      if (!v.is_string()) throw InputError("family 'ladder': weights entries must be strings");
      ws.push_back(Rat::parse(v.get<std::string>()));
      if (ws.back().sign() <= 0) throw InputError("family 'ladder': weights must be positive");
      sum += ws.back();
    }
    if (sum != Rat(1)) throw InputError("family 'ladder': weights sum to " + sum.str());
    ExplicitMdp g;
    StateIdx apex = g.add_state("apex", false, 0);
    g.initial.push_back(apex);
    for (size_t i = 0; i < ws.size(); ++i) {
      StateIdx e = g.add_state("exit" + std::to_string(i), false, i % 2 == 0 ? 2 : 1);
      g.at(e).succ.push_back(Edge{e, Rat(1)});
      g.at(apex).succ.push_back(Edge{e, ws[i]});
    }
    return wrap(std::move(g));
  }

  const Rat p = rat_param(params, "p", Rat(1, 2));
  if (!(p > Rat(0)) || !(p < Rat(1)))
    throw InputError("family 'ladder': p must lie strictly between 0 and 1");
  const Rat q = Rat(1) - p;
  MdpModel m;
  m.initial = {"apex"};
  m.controlled = [](const std::string&) { return false; };
  m.color = [](const std::string& id) {
    if (id == "apex") return 0;
    const uint64_t i = std::stoull(id.substr(4));
    return i % 2 == 0 ? 2 : 1;
  };
  m.succ_at = [p, q](const std::string& id, uint64_t i) -> std::optional<SuccEntry> {
    if (id == "apex") {
      Rat w = p;
      for (uint64_t j = 0; j < i; ++j) w = w * q;  // p q^i
      return SuccEntry{"exit" + std::to_string(i), w};
    }
    if (i > 0) return std::nullopt;
    return SuccEntry{id, Rat(1)};
  };
  m.tail_mass_after = [q](const std::string& id, uint64_t k) -> std::optional<Rat> {
    if (id != "apex") return k >= 1 ? Rat(0) : Rat(1);
    Rat t(1);
    for (uint64_t j = 0; j < k; ++j) t = t * q;  // q^k
    return t;
  };
  m.palette = {0, 1, 2};
  m.declared_finitely_branching = false;
  return m;
}

// a -> b, then b resolves randomly to c or d; leaves are completed with
// self-loops so the model validates and solves.
MdpModel build_fig3(const ojson& params) {
  check_params(params, {}, "fig3");
  ExplicitMdp g;
  StateIdx a = g.add_state("a", true, 0);
  StateIdx b = g.add_state("b", false, 1);
  StateIdx c = g.add_state("c", true, 2);
  StateIdx d = g.add_state("d", true, 1);
  g.initial.push_back(a);
  g.at(a).succ.push_back(Edge{b, Rat(1)});
  g.at(b).succ.push_back(Edge{c, Rat(1, 2)});
  g.at(b).succ.push_back(Edge{d, Rat(1, 2)});
  g.at(c).succ.push_back(Edge{c, Rat(1)});
  g.at(d).succ.push_back(Edge{d, Rat(1)});
  return wrap(std::move(g));
}

// two-sided random walk on the integers, right step with probability p;
// the origin is the only even-colored state
MdpModel build_walk(const ojson& params) {
  check_params(params, {"p"}, "walk");
  const Rat p = rat_param(params, "p", Rat(1, 3));
  if (!(p > Rat(0)) || !(p < Rat(1)))
    throw InputError("family 'walk': p must lie strictly between 0 and 1");
  auto pos = [](const std::string& id) {
    if (id.size() < 2 || id[0] != 'z') throw InputError("walk: bad state id '" + id + "'");
    return std::stoll(id.substr(1));
  };
  MdpModel m;
  m.initial = {"z0"};
  m.controlled = [](const std::string&) { return false; };
  m.color = [pos](const std::string& id) { return pos(id) == 0 ? 2 : 1; };
  m.succ_at = [p, pos](const std::string& id, uint64_t i) -> std::optional<SuccEntry> {
    const long long z = pos(id);
    if (i == 0) return SuccEntry{"z" + std::to_string(z + 1), p};
    if (i == 1) return SuccEntry{"z" + std::to_string(z - 1), Rat(1) - p};
    return std::nullopt;
  };
  m.tail_mass_after = [p](const std::string&, uint64_t k) -> std::optional<Rat> {
    if (k == 0) return Rat(1);
    if (k == 1) return Rat(1) - p;
    return Rat(0);
  };
  m.palette = {1, 2};
  m.declared_finitely_branching = true;
  return m;
}

// reflected walk on n states where every odd position is controlled; the
// controller can steer back to the even-colored left end from everywhere,
// so every state is almost-surely winning under the right choices
MdpModel build_as_win_walk(const ojson& params) {
  check_params(params, {"n"}, "as_win_walk");
  const uint64_t n = nat_param(params, "n", 8);
  if (n < 2) throw InputError("family 'as_win_walk': n must be at least 2");
  ExplicitMdp g;
  for (uint64_t i = 0; i < n; ++i)
    g.add_state("w" + std::to_string(i), i % 2 == 1, i == 0 ? 2 : 1);
  g.initial.push_back(0);
  for (uint64_t i = 0; i < n; ++i) {
    std::vector<StateIdx> nb;
    if (i > 0) nb.push_back(static_cast<StateIdx>(i - 1));
    if (i + 1 < n) nb.push_back(static_cast<StateIdx>(i + 1));
    auto& st = g.at(static_cast<StateIdx>(i));
    const Rat each(1, static_cast<long>(nb.size()));
    for (StateIdx t : nb) st.succ.push_back(Edge{t, st.controlled ? Rat(1) : each});
  }
  return wrap(std::move(g));
}

// seeded DAG over v0..v(n-1) with absorbing goal/trap leaves; edges only
// point forward, so step indices double as a topological order
MdpModel build_acyclic_dag(const ojson& params) {
  check_params(params, {"n", "seed"}, "acyclic_dag");
  const uint64_t n = nat_param(params, "n", 12);
  const uint64_t seed = nat_param(params, "seed", 1);
  if (n < 2) throw InputError("family 'acyclic_dag': n must be at least 2");
  Rng rng(seed);
  ExplicitMdp g;
  for (uint64_t i = 0; i < n; ++i) g.add_state("v" + std::to_string(i), false, 0);
  const StateIdx goal = g.add_state("goal", false, 2);
  const StateIdx trap = g.add_state("trap", false, 1);
  g.at(goal).succ.push_back(Edge{goal, Rat(1)});
  g.at(trap).succ.push_back(Edge{trap, Rat(1)});
  g.initial.push_back(0);
  for (uint64_t i = 0; i < n; ++i) {
    auto& st = g.at(static_cast<StateIdx>(i));
    st.controlled = rng.below(2) == 0;
    std::vector<StateIdx> pool;
    for (uint64_t j = i + 1; j < n; ++j) pool.push_back(static_cast<StateIdx>(j));
    pool.push_back(goal);
    pool.push_back(trap);
    const uint64_t deg = 1 + rng.below(std::min<uint64_t>(3, pool.size()));
    std::set<StateIdx> picked;
    while (picked.size() < deg) picked.insert(pool[rng.below(pool.size())]);
    if (st.controlled) {
      for (StateIdx t : picked) st.succ.push_back(Edge{t, Rat(1)});
    } else {
      std::vector<Rat> w;
      long total = 0;
      for (size_t k = 0; k < picked.size(); ++k) {
        long units = 1 + static_cast<long>(rng.below(4));
        w.push_back(Rat(units));
        total += units;
      }
      size_t k = 0;
      for (StateIdx t : picked) st.succ.push_back(Edge{t, w[k++] / Rat(total)});
    }
  }
  return wrap(std::move(g));
}

}  // namespace

const std::vector<FamilyDoc>& gallery_list() {
  static const std::vector<FamilyDoc> catalog = {
      {"ladder",
       "random apex with countably many exits, weight p(1-p)^i on exit i (or an explicit finite "
       "weight list); even exits win",
       "p=1/2"},
      {"fig3", "a -> b -> {c, d} with a random coin at b and self-loops on the leaves", ""},
      {"walk", "two-sided random walk on the integers, even color only at the origin", "p=1/3"},
      {"as_win_walk",
       "reflected walk on n states with controlled odd positions; almost-surely winnable "
       "everywhere",
       "n=8"},
      {"acyclic_dag", "seeded random DAG with absorbing goal/trap leaves", "n=12, seed=1"},
  };
  return catalog;
}

MdpModel gallery_build(const FamilySpec& spec) {
  if (spec.family == "ladder") return build_ladder(spec.params);
  if (spec.family == "fig3") return build_fig3(spec.params);
  if (spec.family == "walk") return build_walk(spec.params);
  if (spec.family == "as_win_walk") return build_as_win_walk(spec.params);
  if (spec.family == "acyclic_dag") return build_acyclic_dag(spec.params);
  throw InputError("unknown family '" + spec.family + "'");
}

MdpModel gallery_build(const std::string& family) {
  FamilySpec spec;
  spec.family = family;
  spec.params = ojson::object();
  return gallery_build(spec);
}

}  // namespace pf
