#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontoscen/ontology.hpp"

namespace ontoscen {

// One simulator blueprint usable as a scenario entity.
struct AssetDef {
  std::string blueprint_id;
  std::string category;  // car | bicycle | pedestrian | misc
  double length = 0;
  double width = 0;
  double height = 0;
  std::optional<double> mass;  // kg; pedestrians/props may specify one
};

// The set of known assets. The build ships one manifest; alternative
// manifests can be loaded from disk and extended at runtime.
class AssetManifest {
public:
  static const AssetManifest& embedded();
  static AssetManifest parse(std::string_view text);
  static AssetManifest load(const std::string& path);

  void register_asset(AssetDef def);
  const AssetDef* find(const std::string& blueprint_id) const;
  const std::vector<AssetDef>& assets() const { return assets_; }

private:
  std::vector<AssetDef> assets_;
};

// The schema manifest and asset manifest compiled into the binary.
std::string_view embedded_schema_text();
std::string_view embedded_assets_text();

// Builds the master ontology: the full class/property schema, the constant
// vocabulary, the simulator assets, and the default individuals every
// scenario starts from. Deterministic; uses only embedded data.
Ontology build_master();

// Same, from explicit inputs (exercised by tests and tooling).
Ontology build_master(std::string_view schema_text, const AssetManifest& assets);

}  // namespace ontoscen
