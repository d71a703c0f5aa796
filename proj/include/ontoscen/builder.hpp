#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ontoscen/master.hpp"
#include "ontoscen/ontology.hpp"

namespace ontoscen {

enum class Structural { Storyboard, Init, Story, Act, ManeuverGroup, Maneuver, Event };

enum class EntityKind { EgoVehicle, Vehicle, Pedestrian, Bicycle, Misc };

enum class TriggerKind { Start, Stop };

// -- action payloads ----------------------------------------------------------

struct TeleportToWorld {
  std::string entity;
  double x = 0, y = 0, z = 0, heading = 0;
};

struct TeleportRelative {
  std::string entity;
  std::string reference;
  double dx = 0, dy = 0, dz = 0;
};

struct ChangeSpeed {
  std::string entity;
  double target_speed = 0;
  std::string dynamics;  // a TransitionDynamics individual
};

struct RelativeLaneChange {
  std::string entity;
  std::string reference;
  std::int64_t offset = 0;
  std::string dynamics;
};

struct ChangeEnvironment {
  std::string environment;  // an Environment individual
};

using ActionSpec = std::variant<TeleportToWorld, TeleportRelative, ChangeSpeed,
                                RelativeLaneChange, ChangeEnvironment>;

// -- condition payloads ---------------------------------------------------------

struct TraveledDistance {
  std::string entity;
  double distance = 0;
};

struct RelativeDistance {
  std::string entity;
  std::string reference;
  double distance = 0;
  std::string rule = "lessThan";
  std::string distance_type = "cartesianDistance";
  bool freespace = false;
};

struct SimulationTime {
  double time = 0;
  std::string rule = "greaterThan";
};

struct ElementState {
  std::string element;  // a Story/Act/ManeuverGroup/Maneuver/Event/Action individual
  std::string state = "completeState";
};

using ConditionSpec = std::variant<TraveledDistance, RelativeDistance, SimulationTime, ElementState>;

// -- environment ---------------------------------------------------------------

struct EnvironmentSpec {
  std::string date_time = "2022-06-15T12:00:00";
  bool animation = false;
  double sun_azimuth = 0.0;
  double sun_elevation = 1.31;
  double sun_intensity = 100000.0;
  double fog_visual_range = 100000.0;
  std::string cloud_state = "free";
  std::string precipitation_type = "dry";
  double precipitation_intensity = 0.0;  // in [0, 1]
  double friction_scale = 1.0;
};

// Builds one scenario ontology on top of the master. Individuals created
// here carry scenario origin and deterministic names: indiv_<Class><n> with
// a per-class counter, so identical call sequences produce identical
// ontologies.
class ScenarioBuilder {
public:
  ScenarioBuilder(Ontology master, const std::string& town,
                  const AssetManifest& assets = AssetManifest::embedded());

  const std::string& root() const { return root_; }

  // Storyboard under Scenario, Init/Story under Storyboard, Act under Story,
  // ManeuverGroup under Act, Maneuver under ManeuverGroup, Event under
  // Maneuver (events get overwrite priority).
  std::string structural_element(Structural kind, const std::string& parent);

  // Registers an entity with the scenario. The ego reuses the master
  // individual and its fixed asset; other kinds pick the given asset or the
  // first manifest asset of the matching category.
  std::string new_entity(EntityKind kind, const std::optional<std::string>& asset = std::nullopt);

  void add_actor(const std::string& maneuver_group, const std::string& entity);

  std::string new_transition_dynamics(const std::string& shape, const std::string& dimension,
                                      double value);

  std::string new_environment(const EnvironmentSpec& spec);

  // The shared default environment action from the master.
  std::string default_environment_action() const { return "default_environment_action"; }

  std::string new_action(const ActionSpec& spec);

  std::string new_condition(const ConditionSpec& spec, double delay = 0.0,
                            const std::string& edge = "rising");

  // Wraps a concrete action into an event slot (Event -> Action wrapper ->
  // concrete action).
  std::string attach_action(const std::string& event, const std::string& concrete_action);

  // Init actions reference the concrete action directly, without a wrapper.
  void add_init_action(const std::string& init, const std::string& concrete_action);

  std::string new_trigger(TriggerKind kind, const std::vector<std::string>& conditions,
                          const std::string& attach_to,
                          const std::optional<std::string>& name = std::nullopt);

  // Tags the scenario with a corner-case level, e.g. ("content", "domain").
  std::string set_corner_case(const std::string& layer, const std::string& level,
                              const std::string& description);

  void set_description(const std::string& text);

  const Ontology& ontology() const { return onto_; }

  // Validates and returns the finished scenario; throws ValidationError.
  Ontology finalize() const;

private:
  std::string fresh(const std::string& cls);
  void require_entity(const std::string& name) const;
  void require_constant(const std::string& name, const std::string& cls) const;

  Ontology onto_;
  AssetManifest assets_;
  std::string root_;
  std::map<std::string, int> counters_;
  std::set<std::string> entities_;
  bool has_ego_ = false;
};

// The scenario well-formedness rules. Returns every violation found; an
// empty result means the scenario is structurally sound.
//
//   1 storyboard-shape          exactly one init and at least one story
//   2 story-acts                every story has an act
//   3 act-shape                 exactly one start trigger, >=1 maneuver group
//   4 maneuver-group-maneuvers  every maneuver group has a maneuver
//   5 maneuver-events           every maneuver has an event
//   6 event-shape               exactly one start trigger and >=1 action
//   7 entity-binding            by-entity conditions name a triggering entity
//   8 reachability              scenario individuals hang off the root
std::vector<RuleViolation> validate_scenario(const Ontology& scenario);

}  // namespace ontoscen
