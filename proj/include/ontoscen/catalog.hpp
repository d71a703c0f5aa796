#pragma once

#include <string>
#include <vector>

#include "ontoscen/ontology.hpp"

namespace ontoscen {

// One catalog entry. Entries 'i' and 'j' are fusions of the listed source
// entries; entry 'a' realizes its corner case as a camera post-processing
// directive over an ordinary drive instead of scenario content.
struct CatalogEntry {
  std::string id;     // "a" .. "j"
  std::string title;
  std::string layer;  // corner-case layer, empty for effects-only and fused entries
  std::string level;
  std::string summary;
  std::vector<std::string> fused_from;  // source entry ids, empty unless fused
  bool has_effects = false;
};

// The ten published corner-case scenarios, in id order.
const std::vector<CatalogEntry>& catalog_entries();

// Looks an entry up by id; throws UnknownName.
const CatalogEntry& catalog_entry(const std::string& id);

// Deterministically rebuilds an entry's scenario ontology. Fused entries are
// produced by fusing freshly built sources. Throws UnknownName.
Ontology build_catalog_scenario(const std::string& id);

// Post-processing directive and dead-pixel mask text for entries with
// has_effects; throws UnknownName for entries without effects.
std::string catalog_effects_directive(const std::string& id);
std::string catalog_pixel_mask(const std::string& id);

// The statistics table, recomputed from the builds:
//
//   CATALOG-STATS/1
//   <id> <individuals> <scenario-origin individuals>
//
// Effects-only entries report "-" in both count columns.
std::string catalog_stats();

}  // namespace ontoscen
