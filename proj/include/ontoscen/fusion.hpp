#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ontoscen/ontology.hpp"

namespace ontoscen {

// One renamed individual: `from` in input number `input` (1-based) became
// `to` in the fused ontology.
struct FusionRename {
  std::size_t input = 0;
  std::string from;
  std::string to;
};

// An init action that was not carried over because an earlier input already
// initialises the same entity with the same action class but different
// parameters.
struct DroppedInitAction {
  std::size_t input = 0;  // 1-based index of the losing input
  std::string action;     // name the action had in that input
  std::string entity;
  std::string action_class;
};

struct FusionReport {
  std::vector<std::string> inputs;  // root individual of each input, in order
  std::string output_root;
  std::size_t individuals_merged = 0;  // total individuals in the fused ontology
  std::size_t stories_merged = 0;
  std::size_t entities_merged = 0;
  std::size_t init_actions_merged = 0;
  std::size_t defaults_deduplicated = 0;  // constant/default duplicates skipped
  std::vector<FusionRename> renames;
  std::vector<DroppedInitAction> dropped;
};

struct FusionResult {
  Ontology ontology;
  FusionReport report;
};

// Merges n >= 2 valid scenario ontologies set in the same town into a single
// scenario with fresh Scenario/Storyboard/Init roots. Every input's stories,
// entities, init actions, storyboard stop triggers, and corner-case tags are
// relinked onto the new roots; constant and default individuals are kept
// exactly once. Scenario-origin name collisions are resolved with an
// `__<k>` suffix, k being the 1-based input index. When two inputs
// initialise a shared entity with the same action class but different
// parameters the first input wins; the losing action (and anything only it
// referenced) is left out and recorded in the report. Identical duplicates
// are carried verbatim. Throws InputInvalid, TownMismatch, or EgoConflict.
FusionResult fuse(const std::vector<Ontology>& inputs);

}  // namespace ontoscen
