#include <fstream>
#include <set>
#include <sstream>

#include "parity_forge/json_io.hpp"

namespace pf {

namespace {

void require_object(const ojson& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
}

void check_keys(const ojson& j, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& where) {
  require_object(j, where);
  for (const auto& key : required)
    if (!j.contains(key)) throw InputError(where + ": missing key \"" + key + "\"");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!required.count(it.key()) && !optional.count(it.key()))
      throw InputError(where + ": unknown key \"" + it.key() + "\"");
}

std::string str_field(const ojson& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw InputError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

uint64_t nat_field(const ojson& v, const std::string& where) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<int64_t>() < 0))
    throw InputError(where + ": expected a non-negative integer, got " + v.dump());
  return v.get<uint64_t>();
}

Rat rat_field(const ojson& v, const std::string& where) {
  if (!v.is_string())
    throw InputError(where + ": probabilities must be strings like \"1/2\", got " + v.dump());
  auto r = Rat::try_parse(v.get<std::string>());
  if (!r) throw InputError(where + ": cannot parse rational \"" + v.get<std::string>() + "\"");
  return *r;
}

}  // namespace

ojson mdp_to_json(const ExplicitMdp& m) {
  ojson j;
  j["states"] = ojson::array();
  for (const auto& s : m.states) {
    ojson js;
    js["id"] = s.id;
    js["kind"] = s.controlled ? "controlled" : "random";
    js["color"] = s.color;
    js["succ"] = ojson::array();
    for (const auto& e : s.succ) {
      ojson je;
      je["to"] = m.states[e.to].id;
      if (!s.controlled) je["p"] = e.p.str();
      js["succ"].push_back(std::move(je));
    }
    j["states"].push_back(std::move(js));
  }
  j["initial"] = ojson::array();
  for (StateIdx s : m.initial) j["initial"].push_back(m.states[s].id);
  return j;
}

ExplicitMdp mdp_from_json(const ojson& j) {
  check_keys(j, {"states", "initial"}, {}, "model");
  if (!j["states"].is_array()) throw InputError("model: \"states\" must be an array");
  if (!j["initial"].is_array()) throw InputError("model: \"initial\" must be an array");

  ExplicitMdp m;
  struct PendingEdge {
    std::string to;
    Rat p;
  };
  std::vector<std::vector<PendingEdge>> pending;
  for (const auto& js : j["states"]) {
    const std::string where = "state #" + std::to_string(m.states.size());
    check_keys(js, {"id", "kind", "succ"}, {"color"}, where);
    State st;
    st.id = str_field(js, "id", where);
    const std::string kind = str_field(js, "kind", where);
    if (kind == "controlled")
      st.controlled = true;
    else if (kind == "random")
      st.controlled = false;
    else
      throw InputError(where + ": kind must be \"controlled\" or \"random\", got \"" + kind + "\"");
    st.color = js.contains("color")
                   ? static_cast<int>(nat_field(js["color"], where + ".color"))
                   : 0;
    if (!js["succ"].is_array()) throw InputError(where + ": \"succ\" must be an array");
    std::vector<PendingEdge> edges;
    for (const auto& je : js["succ"]) {
      const std::string ewhere = where + " ('" + st.id + "') edge #" + std::to_string(edges.size());
      if (st.controlled) {
        check_keys(je, {"to"}, {}, ewhere);
        edges.push_back({str_field(je, "to", ewhere), Rat(1)});
      } else {
        check_keys(je, {"to", "p"}, {}, ewhere);
        edges.push_back({str_field(je, "to", ewhere), rat_field(je["p"], ewhere + ".p")});
      }
    }
    pending.push_back(std::move(edges));
    m.states.push_back(std::move(st));
  }
  for (size_t s = 0; s < m.states.size(); ++s) {
    for (const auto& pe : pending[s]) {
      const StateIdx t = m.find(pe.to);
      if (t < 0)
        throw InputError("state '" + m.states[s].id + "': successor '" + pe.to +
                         "' is not a state");
      m.states[s].succ.push_back(Edge{t, pe.p});
    }
  }
  for (const auto& ji : j["initial"]) {
    if (!ji.is_string()) throw InputError("model: initial entries must be state ids");
    const StateIdx t = m.find(ji.get<std::string>());
    if (t < 0)
      throw InputError("model: initial state '" + ji.get<std::string>() + "' is not a state");
    m.initial.push_back(t);
  }
  return m;
}

ojson mode_to_json(const Mode& m) {
  ojson j = ojson::object();
  if (m.step) j["step"] = *m.step;
  if (m.bits) j["bits"] = *m.bits;
  return j;
}

Mode mode_from_json(const ojson& j) {
  check_keys(j, {}, {"step", "bits"}, "mode");
  Mode m;
  if (j.contains("step")) m.step = nat_field(j["step"], "mode.step");
  if (j.contains("bits")) {
    const auto b = str_field(j, "bits", "mode");
    for (char c : b)
      if (c != '0' && c != '1') throw InputError("mode.bits: expected a 0/1 string, got \"" + b + "\"");
    m.bits = b;
  }
  return m;
}

ojson strategy_to_json(const Strategy& s) {
  ojson j;
  j["class"] = to_string(s.cls);
  if (s.cls == StratClass::KBit || s.cls == StratClass::KBitMarkov) j["k"] = s.k;
  j["m0"] = mode_to_json(s.m0);
  if (s.horizon) j["horizon"] = *s.horizon;
  if (s.default_rule) j["default_rule"] = *s.default_rule;
  j["table"] = ojson::array();
  for (const auto& row : s.table) {
    ojson jr;
    jr["m"] = mode_to_json(row.m);
    jr["s"] = row.s;
    jr["to"] = row.to;
    jr["m2"] = mode_to_json(row.m2);
    j["table"].push_back(std::move(jr));
  }
  return j;
}

Strategy strategy_from_json(const ojson& j) {
  check_keys(j, {"class", "m0", "table"}, {"k", "horizon", "default_rule"}, "strategy");
  Strategy s;
  s.cls = strat_class_from_string(str_field(j, "class", "strategy"));
  if (j.contains("k")) s.k = static_cast<int>(nat_field(j["k"], "strategy.k"));
  s.m0 = mode_from_json(j["m0"]);
  if (j.contains("horizon")) s.horizon = nat_field(j["horizon"], "strategy.horizon");
  if (j.contains("default_rule")) s.default_rule = str_field(j, "default_rule", "strategy");
  if (!j["table"].is_array()) throw InputError("strategy: \"table\" must be an array");
  for (const auto& jr : j["table"]) {
    const std::string where = "strategy row #" + std::to_string(s.table.size());
    check_keys(jr, {"m", "s", "to", "m2"}, {}, where);
    Strategy::Row row;
    row.m = mode_from_json(jr["m"]);
    row.s = str_field(jr, "s", where);
    row.to = str_field(jr, "to", where);
    row.m2 = mode_from_json(jr["m2"]);
    s.table.push_back(std::move(row));
  }
  const auto issues = check_class_invariants(s);
  if (!issues.empty()) throw InputError("strategy: " + issues.front());
  return s;
}

ojson objective_to_json(const Objective& o, const ExplicitMdp& m) {
  ojson j;
  switch (o.kind) {
    case Objective::Kind::parity:
      j["kind"] = "parity";
      break;
    case Objective::Kind::reach:
      j["kind"] = "reach";
      break;
    case Objective::Kind::safety:
      j["kind"] = "safety";
      break;
  }
  if (o.kind != Objective::Kind::parity) {
    j["target"] = ojson::array();
    for (StateIdx s : o.target) j["target"].push_back(m.states[s].id);
  }
  return j;
}

Objective objective_from_json(const ojson& j, const ExplicitMdp& m) {
  check_keys(j, {"kind"}, {"target"}, "objective");
  const std::string kind = str_field(j, "kind", "objective");
  if (kind == "parity") return Objective::parity();
  if (kind != "reach" && kind != "safety")
    throw InputError("objective: unknown kind \"" + kind + "\"");
  std::vector<StateIdx> target;
  if (j.contains("target")) {
    if (!j["target"].is_array()) throw InputError("objective: \"target\" must be an array");
    for (const auto& jt : j["target"]) {
      if (!jt.is_string()) throw InputError("objective: target entries must be state ids");
      const StateIdx t = m.find(jt.get<std::string>());
      if (t < 0)
        throw InputError("objective: target '" + jt.get<std::string>() + "' is not a state");
      target.push_back(t);
    }
  }
  return kind == "reach" ? Objective::reach(std::move(target))
                         : Objective::safety(std::move(target));
}

ojson value_report_to_json(const ValueReport& r, const ExplicitMdp& m) {
  ojson j;
  j["objective"] = objective_to_json(r.objective, m);
  j["mode"] = r.mode == NumMode::exact ? "exact" : "float";
  j["values"] = ojson::object();
  for (size_t s = 0; s < m.states.size(); ++s) {
    if (r.mode == NumMode::exact)
      j["values"][m.states[s].id] = r.exact[s].str();
    else
      j["values"][m.states[s].id] = ojson::array({r.approx[s].first, r.approx[s].second});
  }
  if (r.witness) j["witness"] = strategy_to_json(*r.witness);
  return j;
}

ojson check_report_to_json(const CheckReport& r) {
  ojson j;
  j["suite"] = r.suite;
  j["pass"] = r.pass();
  j["items"] = ojson::array();
  for (const auto& item : r.items) {
    ojson ji;
    ji["name"] = item.name;
    ji["pass"] = item.pass;
    ji["details"] = item.details;
    j["items"].push_back(std::move(ji));
  }
  return j;
}

std::string dump_json(const ojson& j) { return j.dump(2) + "\n"; }

ojson parse_json(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

void write_json_file(const std::string& path, const ojson& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << dump_json(j);
}

bool is_family_json(const ojson& j) { return j.is_object() && j.contains("family"); }

FamilySpec family_from_json(const ojson& j) {
  check_keys(j, {"family"}, {"params"}, "family");
  FamilySpec f;
  f.family = str_field(j, "family", "family");
  f.params = j.contains("params") ? j["params"] : ojson::object();
  require_object(f.params, "family.params");
  return f;
}

}  // namespace pf
