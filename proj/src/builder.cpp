#include "ontoscen/builder.hpp"

#include <algorithm>
#include <deque>

namespace ontoscen {

namespace {

struct StructuralRule {
  const char* cls;
  const char* parent_cls;
  const char* link;
};

const StructuralRule& structural_rule(Structural kind) {
  static const StructuralRule rules[] = {
      {"Storyboard", "Scenario", "has_storyboard"},
      {"Init", "Storyboard", "has_init"},
      {"Story", "Storyboard", "has_story"},
      {"Act", "Story", "has_act"},
      {"ManeuverGroup", "Act", "has_maneuver_group"},
      {"Maneuver", "ManeuverGroup", "has_maneuver"},
      {"Event", "Maneuver", "has_event"},
  };
  return rules[static_cast<int>(kind)];
}

const char* entity_class(EntityKind kind) {
  switch (kind) {
    case EntityKind::EgoVehicle:
    case EntityKind::Vehicle: return "Vehicle";
    case EntityKind::Pedestrian: return "Pedestrian";
    case EntityKind::Bicycle: return "Bicycle";
    case EntityKind::Misc: return "Misc";
  }
  return "Vehicle";
}

const char* entity_category(EntityKind kind) {
  switch (kind) {
    case EntityKind::EgoVehicle:
    case EntityKind::Vehicle: return "car";
    case EntityKind::Pedestrian: return "pedestrian";
    case EntityKind::Bicycle: return "bicycle";
    case EntityKind::Misc: return "misc";
  }
  return "car";
}

}  // namespace

ScenarioBuilder::ScenarioBuilder(Ontology master, const std::string& town,
                                 const AssetManifest& assets)
    : onto_(std::move(master)), assets_(assets) {
  root_ = fresh("Scenario");
  onto_.add_individual(root_, {"Scenario"}, Origin::Scenario);
  if (onto_.has_individual(town) && onto_.individual_is_a(town, "Town")) {
    onto_.assert_object(root_, "has_town", town);
  } else {
    if (!Ontology::valid_name(town)) {
      throw Error(ErrorCode::BadName, "bad town name '" + town + "'");
    }
    std::string fresh_town = fresh("Town");
    onto_.add_individual(fresh_town, {"Town"}, Origin::Scenario);
    onto_.assert_data(fresh_town, "town_name", make_string_literal(town));
    onto_.assert_object(root_, "has_town", fresh_town);
  }
}

std::string ScenarioBuilder::fresh(const std::string& cls) {
  int& n = counters_[cls];
  std::string name;
  do {
    ++n;
    name = "indiv_" + cls + std::to_string(n);
  } while (onto_.has_individual(name));
  return name;
}

void ScenarioBuilder::require_entity(const std::string& name) const {
  if (!entities_.count(name)) {
    throw Error(ErrorCode::UnknownEntity, "'" + name + "' is not an entity of this scenario");
  }
}

void ScenarioBuilder::require_constant(const std::string& name, const std::string& cls) const {
  if (!onto_.has_individual(name) || !onto_.individual_is_a(name, cls)) {
    throw Error(ErrorCode::UnknownName, "'" + name + "' is not a known " + cls);
  }
}

std::string ScenarioBuilder::structural_element(Structural kind, const std::string& parent) {
  const StructuralRule& rule = structural_rule(kind);
  if (!onto_.has_individual(parent)) {
    throw Error(ErrorCode::UnknownName, "unknown parent individual '" + parent + "'");
  }
  if (!onto_.individual_is_a(parent, rule.parent_cls)) {
    throw Error(ErrorCode::BadParentKind, std::string("a ") + rule.cls + " belongs under a " +
                                              rule.parent_cls + ", not '" + parent + "'");
  }
  if (kind == Structural::Storyboard && !onto_.objects_of(parent, "has_storyboard").empty()) {
    throw Error(ErrorCode::DuplicateName, "'" + parent + "' already has a storyboard");
  }
  std::string name = fresh(rule.cls);
  onto_.add_individual(name, {rule.cls}, Origin::Scenario);
  onto_.assert_object(parent, rule.link, name);
  if (kind == Structural::Event) {
    onto_.assert_object(name, "has_priority", "overwrite");
  }
  return name;
}

std::string ScenarioBuilder::new_entity(EntityKind kind, const std::optional<std::string>& asset) {
  if (kind == EntityKind::EgoVehicle) {
    if (has_ego_) throw Error(ErrorCode::DuplicateEgo, "the scenario already has an ego vehicle");
    if (asset) {
      throw Error(ErrorCode::AssetKindMismatch,
                  "the ego vehicle's asset is fixed and cannot be overridden");
    }
    onto_.assert_object(root_, "has_entity", "ego_vehicle");
    entities_.insert("ego_vehicle");
    has_ego_ = true;
    return "ego_vehicle";
  }

  const char* want = entity_category(kind);
  const AssetDef* def = nullptr;
  if (asset) {
    def = assets_.find(*asset);
    if (!def) throw Error(ErrorCode::UnknownName, "asset '" + *asset + "' is not in the manifest");
    if (def->category != want) {
      throw Error(ErrorCode::AssetKindMismatch, "asset '" + *asset + "' is a " + def->category +
                                                    ", expected " + want);
    }
  } else {
    for (const auto& a : assets_.assets()) {
      if (a.category == want) { def = &a; break; }
    }
    if (!def) throw Error(ErrorCode::UnknownName, std::string("no ") + want + " asset in the manifest");
  }

  // assets from the master are individuals already; others join the scenario
  std::string asset_indiv;
  if (onto_.has_individual(def->blueprint_id) &&
      onto_.individual_is_a(def->blueprint_id, "Asset")) {
    asset_indiv = def->blueprint_id;
  } else {
    asset_indiv = fresh("Asset");
    onto_.add_individual(asset_indiv, {"Asset"}, Origin::Scenario);
    onto_.assert_data(asset_indiv, "blueprint_id", make_string_literal(def->blueprint_id));
    onto_.assert_data(asset_indiv, "asset_category", make_token_literal(def->category));
  }

  std::string name = fresh(entity_class(kind));
  onto_.add_individual(name, {entity_class(kind)}, Origin::Scenario);
  onto_.assert_object(root_, "has_entity", name);
  onto_.assert_object(name, "has_asset", asset_indiv);
  entities_.insert(name);
  return name;
}

void ScenarioBuilder::add_actor(const std::string& maneuver_group, const std::string& entity) {
  require_entity(entity);
  onto_.assert_object(maneuver_group, "has_actor", entity);
}

std::string ScenarioBuilder::new_transition_dynamics(const std::string& shape,
                                                     const std::string& dimension, double value) {
  require_constant(shape, "DynamicsShape");
  require_constant(dimension, "DynamicsDimension");
  std::string name = fresh("TransitionDynamics");
  onto_.add_individual(name, {"TransitionDynamics"}, Origin::Scenario);
  onto_.assert_object(name, "has_dynamics_shape", shape);
  onto_.assert_object(name, "has_dynamics_dimension", dimension);
  onto_.assert_data(name, "dynamics_value", make_literal(value));
  return name;
}

std::string ScenarioBuilder::new_environment(const EnvironmentSpec& spec) {
  if (!(spec.fog_visual_range > 0)) {
    throw Error(ErrorCode::RangeError, "fog visual range must be positive");
  }
  if (!(spec.precipitation_intensity >= 0.0 && spec.precipitation_intensity <= 1.0)) {
    throw Error(ErrorCode::RangeError, "precipitation intensity must be within [0, 1]");
  }
  require_constant(spec.cloud_state, "CloudState");
  require_constant(spec.precipitation_type, "PrecipitationType");
  Literal date_time = make_string_literal(spec.date_time);

  std::string env = fresh("Environment");
  std::string tod = fresh("TimeOfDay");
  std::string weather = fresh("Weather");
  std::string sun = fresh("Sun");
  std::string fog = fresh("Fog");
  std::string precipitation = fresh("Precipitation");
  std::string road = fresh("RoadCondition");
  onto_.add_individual(env, {"Environment"}, Origin::Scenario);
  onto_.add_individual(tod, {"TimeOfDay"}, Origin::Scenario);
  onto_.add_individual(weather, {"Weather"}, Origin::Scenario);
  onto_.add_individual(sun, {"Sun"}, Origin::Scenario);
  onto_.add_individual(fog, {"Fog"}, Origin::Scenario);
  onto_.add_individual(precipitation, {"Precipitation"}, Origin::Scenario);
  onto_.add_individual(road, {"RoadCondition"}, Origin::Scenario);

  onto_.assert_object(env, "has_time_of_day", tod);
  onto_.assert_object(env, "has_weather", weather);
  onto_.assert_object(env, "has_road_condition", road);
  onto_.assert_data(tod, "animation", make_literal(spec.animation));
  onto_.assert_data(tod, "date_time", date_time);
  onto_.assert_object(weather, "has_sun", sun);
  onto_.assert_object(weather, "has_fog", fog);
  onto_.assert_object(weather, "has_precipitation", precipitation);
  onto_.assert_object(weather, "has_cloud_state", spec.cloud_state);
  onto_.assert_data(sun, "azimuth", make_literal(spec.sun_azimuth));
  onto_.assert_data(sun, "elevation", make_literal(spec.sun_elevation));
  onto_.assert_data(sun, "intensity", make_literal(spec.sun_intensity));
  onto_.assert_data(fog, "visual_range", make_literal(spec.fog_visual_range));
  onto_.assert_object(precipitation, "has_precipitation_type", spec.precipitation_type);
  onto_.assert_data(precipitation, "precipitation_intensity",
                    make_literal(spec.precipitation_intensity));
  onto_.assert_data(road, "friction_scale", make_literal(spec.friction_scale));
  return env;
}

std::string ScenarioBuilder::new_action(const ActionSpec& spec) {
  if (const auto* t = std::get_if<TeleportToWorld>(&spec)) {
    require_entity(t->entity);
    std::string action = fresh("TeleportAction");
    std::string pos = fresh("WorldPosition");
    onto_.add_individual(action, {"TeleportAction"}, Origin::Scenario);
    onto_.add_individual(pos, {"WorldPosition"}, Origin::Scenario);
    onto_.assert_object(action, "applies_to", t->entity);
    onto_.assert_object(action, "has_position", pos);
    onto_.assert_data(pos, "pos_x", make_literal(t->x));
    onto_.assert_data(pos, "pos_y", make_literal(t->y));
    onto_.assert_data(pos, "pos_z", make_literal(t->z));
    onto_.assert_data(pos, "pos_heading", make_literal(t->heading));
    return action;
  }
  if (const auto* t = std::get_if<TeleportRelative>(&spec)) {
    require_entity(t->entity);
    require_entity(t->reference);
    std::string action = fresh("TeleportAction");
    std::string pos = fresh("RelativeObjectPosition");
    onto_.add_individual(action, {"TeleportAction"}, Origin::Scenario);
    onto_.add_individual(pos, {"RelativeObjectPosition"}, Origin::Scenario);
    onto_.assert_object(action, "applies_to", t->entity);
    onto_.assert_object(action, "has_position", pos);
    onto_.assert_object(pos, "has_reference_entity", t->reference);
    onto_.assert_data(pos, "delta_x", make_literal(t->dx));
    onto_.assert_data(pos, "delta_y", make_literal(t->dy));
    onto_.assert_data(pos, "delta_z", make_literal(t->dz));
    return action;
  }
  if (const auto* s = std::get_if<ChangeSpeed>(&spec)) {
    require_entity(s->entity);
    if (s->dynamics.empty()) {
      throw Error(ErrorCode::MissingDynamics, "a speed change requires transition dynamics");
    }
    if (!onto_.has_individual(s->dynamics)) {
      throw Error(ErrorCode::UnknownName, "unknown dynamics '" + s->dynamics + "'");
    }
    if (!onto_.individual_is_a(s->dynamics, "TransitionDynamics")) {
      throw Error(ErrorCode::KindMismatch, "'" + s->dynamics + "' is not TransitionDynamics");
    }
    std::string action = fresh("SpeedAction");
    onto_.add_individual(action, {"SpeedAction"}, Origin::Scenario);
    onto_.assert_object(action, "applies_to", s->entity);
    onto_.assert_data(action, "target_speed", make_literal(s->target_speed));
    onto_.assert_object(action, "has_dynamics", s->dynamics);
    return action;
  }
  if (const auto* l = std::get_if<RelativeLaneChange>(&spec)) {
    require_entity(l->entity);
    require_entity(l->reference);
    if (l->dynamics.empty()) {
      throw Error(ErrorCode::MissingDynamics, "a lane change requires transition dynamics");
    }
    if (!onto_.has_individual(l->dynamics)) {
      throw Error(ErrorCode::UnknownName, "unknown dynamics '" + l->dynamics + "'");
    }
    if (!onto_.individual_is_a(l->dynamics, "TransitionDynamics")) {
      throw Error(ErrorCode::KindMismatch, "'" + l->dynamics + "' is not TransitionDynamics");
    }
    std::string action = fresh("RelativeLaneChangeAction");
    onto_.add_individual(action, {"RelativeLaneChangeAction"}, Origin::Scenario);
    onto_.assert_object(action, "applies_to", l->entity);
    onto_.assert_object(action, "has_reference_entity", l->reference);
    onto_.assert_data(action, "lane_offset", make_literal(l->offset));
    onto_.assert_object(action, "has_dynamics", l->dynamics);
    return action;
  }
  const auto& e = std::get<ChangeEnvironment>(spec);
  if (!onto_.has_individual(e.environment)) {
    throw Error(ErrorCode::UnknownName, "unknown environment '" + e.environment + "'");
  }
  if (!onto_.individual_is_a(e.environment, "Environment")) {
    throw Error(ErrorCode::KindMismatch, "'" + e.environment + "' is not an Environment");
  }
  std::string action = fresh("EnvironmentAction");
  onto_.add_individual(action, {"EnvironmentAction"}, Origin::Scenario);
  onto_.assert_object(action, "has_environment", e.environment);
  return action;
}

std::string ScenarioBuilder::new_condition(const ConditionSpec& spec, double delay,
                                           const std::string& edge) {
  require_constant(edge, "ConditionEdge");
  Literal delay_lit = make_literal(delay);

  auto require_rule = [this](const std::string& rule) {
    if (!onto_.has_individual(rule) || !onto_.individual_is_a(rule, "Rule")) {
      throw Error(ErrorCode::UnknownRule, "'" + rule + "' is not a comparison rule");
    }
  };

  std::string name;
  if (const auto* t = std::get_if<TraveledDistance>(&spec)) {
    require_entity(t->entity);
    name = fresh("TraveledDistanceCondition");
    onto_.add_individual(name, {"TraveledDistanceCondition"}, Origin::Scenario);
    onto_.assert_object(name, "has_triggering_entity", t->entity);
    onto_.assert_object(name, "has_triggering_entities_rule", "any");
    onto_.assert_data(name, "condition_value", make_literal(t->distance));
  } else if (const auto* r = std::get_if<RelativeDistance>(&spec)) {
    require_entity(r->entity);
    require_entity(r->reference);
    require_rule(r->rule);
    require_constant(r->distance_type, "RelativeDistanceType");
    name = fresh("RelativeDistanceCondition");
    onto_.add_individual(name, {"RelativeDistanceCondition"}, Origin::Scenario);
    onto_.assert_object(name, "has_triggering_entity", r->entity);
    onto_.assert_object(name, "has_triggering_entities_rule", "any");
    onto_.assert_object(name, "has_reference_entity", r->reference);
    onto_.assert_data(name, "condition_value", make_literal(r->distance));
    onto_.assert_object(name, "has_rule", r->rule);
    onto_.assert_object(name, "has_relative_distance_type", r->distance_type);
    onto_.assert_data(name, "freespace", make_literal(r->freespace));
  } else if (const auto* s = std::get_if<SimulationTime>(&spec)) {
    require_rule(s->rule);
    name = fresh("SimulationTimeCondition");
    onto_.add_individual(name, {"SimulationTimeCondition"}, Origin::Scenario);
    onto_.assert_data(name, "condition_value", make_literal(s->time));
    onto_.assert_object(name, "has_rule", s->rule);
  } else {
    const auto& e = std::get<ElementState>(spec);
    static const std::pair<const char*, const char*> kElementTypes[] = {
        {"Story", "story"},           {"Act", "act"},
        {"ManeuverGroup", "maneuverGroup"}, {"Maneuver", "maneuver"},
        {"Event", "event"},           {"Action", "action"},
    };
    const char* type_const = nullptr;
    if (onto_.has_individual(e.element)) {
      for (const auto& [cls, constant] : kElementTypes) {
        if (onto_.individual_is_a(e.element, cls)) {
          type_const = constant;
          break;
        }
      }
    }
    if (!type_const) {
      throw Error(ErrorCode::UnknownElementRef,
                  "'" + e.element + "' is not a storyboard element of this scenario");
    }
    require_constant(e.state, "StoryboardElementState");
    name = fresh("StoryboardElementStateCondition");
    onto_.add_individual(name, {"StoryboardElementStateCondition"}, Origin::Scenario);
    onto_.assert_object(name, "has_storyboard_element", e.element);
    onto_.assert_object(name, "has_storyboard_element_type", type_const);
    onto_.assert_object(name, "has_element_state", e.state);
  }

  onto_.assert_data(name, "condition_delay", delay_lit);
  onto_.assert_object(name, "has_condition_edge", edge);
  return name;
}

std::string ScenarioBuilder::attach_action(const std::string& event,
                                           const std::string& concrete_action) {
  if (!onto_.has_individual(event)) {
    throw Error(ErrorCode::UnknownName, "unknown event '" + event + "'");
  }
  if (!onto_.individual_is_a(event, "Event")) {
    throw Error(ErrorCode::KindMismatch, "'" + event + "' is not an Event");
  }
  std::string wrapper = fresh("Action");
  onto_.add_individual(wrapper, {"Action"}, Origin::Scenario);
  onto_.assert_object(event, "has_action", wrapper);
  onto_.assert_object(wrapper, "has_concrete_action", concrete_action);
  return wrapper;
}

void ScenarioBuilder::add_init_action(const std::string& init, const std::string& concrete_action) {
  onto_.assert_object(init, "has_init_action", concrete_action);
}

std::string ScenarioBuilder::new_trigger(TriggerKind kind,
                                         const std::vector<std::string>& conditions,
                                         const std::string& attach_to,
                                         const std::optional<std::string>& name) {
  if (conditions.empty()) {
    throw Error(ErrorCode::EmptyConditions, "a trigger requires at least one condition");
  }
  if (!onto_.has_individual(attach_to)) {
    throw Error(ErrorCode::UnknownName, "unknown attach target '" + attach_to + "'");
  }
  bool ok = kind == TriggerKind::Start
                ? onto_.individual_is_a(attach_to, "Act") || onto_.individual_is_a(attach_to, "Event")
                : onto_.individual_is_a(attach_to, "Act") ||
                      onto_.individual_is_a(attach_to, "Storyboard");
  if (!ok) {
    throw Error(ErrorCode::BadAttachTarget,
                std::string(kind == TriggerKind::Start ? "start" : "stop") +
                    " triggers cannot attach to '" + attach_to + "'");
  }
  for (const auto& c : conditions) {
    if (!onto_.has_individual(c)) throw Error(ErrorCode::UnknownName, "unknown condition '" + c + "'");
    if (!onto_.individual_is_a(c, "Condition")) {
      throw Error(ErrorCode::KindMismatch, "'" + c + "' is not a Condition");
    }
  }
  const char* cls = kind == TriggerKind::Start ? "StartTrigger" : "StopTrigger";
  std::string trigger = name ? *name : fresh(cls);
  onto_.add_individual(trigger, {cls}, Origin::Scenario);
  for (const auto& c : conditions) {
    onto_.assert_object(trigger, "has_condition", c);
  }
  onto_.assert_object(attach_to, kind == TriggerKind::Start ? "has_start_trigger" : "has_stop_trigger",
                      trigger);
  return trigger;
}

std::string ScenarioBuilder::set_corner_case(const std::string& layer, const std::string& level,
                                             const std::string& description) {
  static const std::map<std::pair<std::string, std::string>, std::string> kLevels = {
      {{"sensor", "hardware"}, "HardwareLevel"},   {{"sensor", "physical"}, "PhysicalLevel"},
      {{"content", "domain"}, "DomainLevel"},      {{"content", "object"}, "ObjectLevel"},
      {{"content", "scene"}, "SceneLevel"},        {{"temporal", "scenario"}, "ScenarioLevel"},
  };
  auto it = kLevels.find({layer, level});
  if (it == kLevels.end()) {
    throw Error(ErrorCode::InvalidPair,
                "no corner-case level for layer '" + layer + "' and level '" + level + "'");
  }
  Literal text = make_string_literal(description);
  std::string tag = fresh(it->second);
  onto_.add_individual(tag, {it->second}, Origin::Scenario);
  onto_.assert_object(root_, "has_corner_case", tag);
  onto_.assert_data(tag, "description", text);
  return tag;
}

void ScenarioBuilder::set_description(const std::string& text) {
  onto_.assert_data(root_, "description", make_string_literal(text));
}

Ontology ScenarioBuilder::finalize() const {
  auto violations = validate_scenario(onto_);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return onto_;
}

std::vector<RuleViolation> validate_scenario(const Ontology& o) {
  std::vector<RuleViolation> out;
  auto arity = [&o](const std::string& s, const std::string& p) {
    return o.objects_of(s, p).size();
  };

  for (const auto& sb : o.individuals_of("Storyboard")) {
    std::size_t inits = arity(sb, "has_init");
    if (inits != 1) {
      out.push_back({1, "storyboard-shape", sb,
                     "expected exactly one init, found " + std::to_string(inits)});
    }
    if (arity(sb, "has_story") == 0) {
      out.push_back({1, "storyboard-shape", sb, "storyboard has no stories"});
    }
  }
  for (const auto& story : o.individuals_of("Story")) {
    if (arity(story, "has_act") == 0) {
      out.push_back({2, "story-acts", story, "story has no acts"});
    }
  }
  for (const auto& act : o.individuals_of("Act")) {
    std::size_t triggers = arity(act, "has_start_trigger");
    if (triggers != 1) {
      out.push_back({3, "act-shape", act,
                     "expected exactly one start trigger, found " + std::to_string(triggers)});
    }
    if (arity(act, "has_maneuver_group") == 0) {
      out.push_back({3, "act-shape", act, "act has no maneuver groups"});
    }
  }
  for (const auto& mg : o.individuals_of("ManeuverGroup")) {
    if (arity(mg, "has_maneuver") == 0) {
      out.push_back({4, "maneuver-group-maneuvers", mg, "maneuver group has no maneuvers"});
    }
  }
  for (const auto& man : o.individuals_of("Maneuver")) {
    if (arity(man, "has_event") == 0) {
      out.push_back({5, "maneuver-events", man, "maneuver has no events"});
    }
  }
  for (const auto& ev : o.individuals_of("Event")) {
    std::size_t triggers = arity(ev, "has_start_trigger");
    if (triggers != 1) {
      out.push_back({6, "event-shape", ev,
                     "expected exactly one start trigger, found " + std::to_string(triggers)});
    }
    if (arity(ev, "has_action") == 0) {
      out.push_back({6, "event-shape", ev, "event has no actions"});
    }
  }
  for (const auto& cond : o.individuals_of("ByEntityCondition")) {
    if (arity(cond, "has_triggering_entity") == 0) {
      out.push_back({7, "entity-binding", cond, "condition names no triggering entity"});
    }
  }

  // rule 8: every scenario-origin individual must hang off a scenario root
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& a : o.assertions()) {
    if (a.is_object) adjacency[a.subject].push_back(a.object);
  }
  std::set<std::string> reached;
  std::deque<std::string> frontier;
  for (const auto& root : o.individuals_of("Scenario")) {
    if (reached.insert(root).second) frontier.push_back(root);
  }
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.front());
    frontier.pop_front();
    auto it = adjacency.find(cur);
    if (it == adjacency.end()) continue;
    for (const auto& next : it->second) {
      if (reached.insert(next).second) frontier.push_back(next);
    }
  }
  for (const auto& [name, def] : o.individuals()) {
    if (def.origin == Origin::Scenario && !reached.count(name)) {
      out.push_back({8, "reachability", name, "not reachable from the scenario root"});
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const RuleViolation& a, const RuleViolation& b) { return a.rule < b.rule; });
  return out;
}

}  // namespace ontoscen
