#pragma once

#include <string>
#include <string_view>

#include "ontoscen/master.hpp"
#include "ontoscen/ontology.hpp"

namespace ontoscen {

// Parses the scenario description language (one statement per line; see
// docs/formats.md for the grammar) and replays it through ScenarioBuilder,
// returning the finalized scenario ontology.
//
// Parse and builder errors are reported as "<filename>:<line>:<column>:"
// prefixed messages; finalize failures surface as ValidationError.
Ontology parse_scenario_text(std::string_view text, const std::string& filename = "<input>",
                             const AssetManifest& assets = AssetManifest::embedded());

// Same, reading the file at `path`. Throws IoError when unreadable.
Ontology load_scenario_text(const std::string& path,
                            const AssetManifest& assets = AssetManifest::embedded());

}  // namespace ontoscen
