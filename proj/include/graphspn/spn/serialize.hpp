#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "graphspn/spn/spn.hpp"

namespace graphspn::spn {

// {"variables":[{"id","cardinality"}],
//  "nodes":[{"id","kind":"sum|product|indicator","children","weights","var","value"}],
//  "root"}
// Keys are emitted in sorted order and nodes by id, so a save/load/save cycle
// reproduces the same bytes.
nlohmann::json to_json(const Spn& spn);
Spn spn_from_json(const nlohmann::json& doc);

void save_spn(const Spn& spn, const std::filesystem::path& path);
Spn load_spn(const std::filesystem::path& path);

}  // namespace graphspn::spn
