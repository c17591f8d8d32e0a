#pragma once

#include <string>

#include <json.hpp>

#include "parity_forge/analysis.hpp"
#include "parity_forge/mdp.hpp"
#include "parity_forge/strategy.hpp"

namespace pf {

using ojson = nlohmann::ordered_json;

// Serialization is canonical: fixed key order, probabilities as "num/den"
// strings, two-space indent, trailing newline. parse -> dump is the identity
// on canonical input.

ojson mdp_to_json(const ExplicitMdp& m);
ExplicitMdp mdp_from_json(const ojson& j);

ojson mode_to_json(const Mode& m);
Mode mode_from_json(const ojson& j);

ojson strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const ojson& j);

ojson objective_to_json(const Objective& o, const ExplicitMdp& m);
Objective objective_from_json(const ojson& j, const ExplicitMdp& m);

ojson value_report_to_json(const ValueReport& r, const ExplicitMdp& m);
ojson check_report_to_json(const CheckReport& r);

std::string dump_json(const ojson& j);
ojson parse_json(const std::string& text);
ojson read_json_file(const std::string& path);
void write_json_file(const std::string& path, const ojson& j);

// Model files hold either an explicit MDP or a generator reference
// {"family": name, "params": {...}}.
struct FamilySpec {
  std::string family;
  ojson params;  // object, possibly empty
};

bool is_family_json(const ojson& j);
FamilySpec family_from_json(const ojson& j);

}  // namespace pf
