#pragma once

#include <string>
#include <vector>

#include "parity_forge/json_io.hpp"
#include "parity_forge/model.hpp"

namespace pf {

struct FamilyDoc {
  std::string name;
  std::string summary;
  std::string defaults;  // rendered as "key=value, ..."
};

// Catalog in stable order.
const std::vector<FamilyDoc>& gallery_list();

// Build a family instance. Generators are pure: the same spec always yields
// the same model. Throws InputError for unknown families or parameters
// outside the documented schema.
MdpModel gallery_build(const FamilySpec& spec);

// Convenience for tests: "name" with default params.
MdpModel gallery_build(const std::string& family);

}  // namespace pf
