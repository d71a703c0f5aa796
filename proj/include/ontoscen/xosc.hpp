#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ontoscen/master.hpp"
#include "ontoscen/ontology.hpp"
#include "ontoscen/xml.hpp"

namespace ontoscen {

struct XoscViolation {
  std::string path;  // element path, e.g. /OpenSCENARIO/Storyboard/Story[1]
  std::string rule;
};

// An OpenSCENARIO 1.0 document tree. The FileHeader date attribute is left
// empty until emission so that lowering stays a pure function.
struct XoscDocument {
  XmlNode root;  // the <OpenSCENARIO> element
};

// Lowers a valid scenario ontology into an OpenSCENARIO document. Asset
// dimensions and masses are taken from `assets`. Sibling order is the
// ontology name order except inside Init, where authored action order is
// kept. Throws ValidationError for an invalid scenario, UnknownName for an
// asset the manifest does not know, and UnloweredIndividual when a reachable
// scenario individual has no XML mapping.
XoscDocument lower(const Ontology& scenario,
                   const AssetManifest& assets = AssetManifest::embedded());

// Serializes the document. `fixed_date` (e.g. "2022-06-15T12:00:00") stamps
// the FileHeader for byte-stable output; otherwise the current UTC time is
// used.
std::string emit_xml(const XoscDocument& doc,
                     const std::optional<std::string>& fixed_date = std::nullopt);

// Structural conformance check over the supported OpenSCENARIO 1.0 subset:
// containment, required children, choice groups, and required attributes.
// Empty result means the document also passes the bundled XML schema.
std::vector<XoscViolation> validate_xosc(const XoscDocument& doc);

}  // namespace ontoscen
