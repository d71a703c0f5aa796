#include "ontoscen/xosc.hpp"

#include <algorithm>
#include <ctime>
#include <deque>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ontoscen/builder.hpp"

namespace ontoscen {

namespace {

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  return buf;
}

// Turns a scenario ontology into the document tree, keeping track of which
// individuals produced a node so the final accounting can flag leftovers.
class Lowering {
public:
  Lowering(const Ontology& o, const AssetManifest& assets) : o_(o), assets_(assets) {}

  XoscDocument run();

private:
  std::string lex(const std::string& subject, const std::string& property) const;
  std::string ref(const std::string& subject, const std::string& property) const;
  const std::string& concrete_class(const std::string& indiv) const;
  static std::vector<std::string> sorted(std::vector<std::string> names);

  void emit_entity(XmlNode& entities_node, const std::string& entity);
  void emit_bounding_box(XmlNode& parent, const std::string& entity, const AssetDef& def);
  void emit_init(XmlNode& storyboard_node, const std::string& init);
  void emit_story(XmlNode& storyboard_node, const std::string& story);
  void emit_act(XmlNode& story_node, const std::string& act);
  void emit_maneuver_group(XmlNode& act_node, const std::string& group);
  void emit_event(XmlNode& maneuver_node, const std::string& event);
  void emit_concrete_action(XmlNode& slot, const std::string& action);
  void emit_position(XmlNode& holder, const std::string& position);
  void emit_dynamics(XmlNode& parent, const char* element, const std::string& dynamics);
  void emit_environment(XmlNode& parent, const std::string& env);
  void emit_trigger_into(XmlNode& trigger_node, const std::string& trigger);
  void emit_condition(XmlNode& group_node, const std::string& condition);

  void mark(const std::string& indiv) { mapped_.insert(indiv); }
  void check_accounting(const std::string& root) const;

  const Ontology& o_;
  const AssetManifest& assets_;
  std::set<std::string> mapped_;
};

std::string Lowering::lex(const std::string& subject, const std::string& property) const {
  auto lit = o_.literal_of(subject, property);
  if (!lit) {
    throw Error(ErrorCode::MissingPayload, "'" + subject + "' has no " + property + " value");
  }
  return lit->lexical;
}

std::string Lowering::ref(const std::string& subject, const std::string& property) const {
  auto obj = o_.object_of(subject, property);
  if (!obj) {
    throw Error(ErrorCode::MissingPayload, "'" + subject + "' has no " + property + " link");
  }
  return *obj;
}

const std::string& Lowering::concrete_class(const std::string& indiv) const {
  return *o_.individual(indiv).classes.begin();
}

std::vector<std::string> Lowering::sorted(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  return names;
}

XoscDocument Lowering::run() {
  auto violations = validate_scenario(o_);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  auto roots = o_.individuals_of("Scenario");
  if (roots.size() != 1) {
    throw Error(ErrorCode::InputInvalid,
                "expected exactly one scenario root, found " + std::to_string(roots.size()));
  }
  const std::string& root = roots.front();

  XoscDocument doc;
  doc.root = XmlNode("OpenSCENARIO");
  mark(root);

  std::string description;
  for (const auto& a : o_.assertions_of(root)) {
    if (a.is_object || a.property != "description") continue;
    if (!description.empty()) description += "; ";
    description += a.literal.lexical;
  }
  doc.root.child("FileHeader")
      .attr("author", "ontoscen")
      .attr("date", "")  // stamped by emit_xml
      .attr("description", description)
      .attr("revMajor", "1")
      .attr("revMinor", "0");
  doc.root.child("ParameterDeclarations");
  doc.root.child("CatalogLocations");
  doc.root.child("RoadNetwork").child("LogicFile").attr("filepath",
                                                        lex(ref(root, "has_town"), "town_name"));

  XmlNode& entities_node = doc.root.child("Entities");
  for (const auto& entity : sorted(o_.objects_of(root, "has_entity"))) {
    emit_entity(entities_node, entity);
  }

  const std::string storyboard = ref(root, "has_storyboard");
  XmlNode& sb_node = doc.root.child("Storyboard");
  mark(storyboard);
  emit_init(sb_node, ref(storyboard, "has_init"));
  for (const auto& story : sorted(o_.objects_of(storyboard, "has_story"))) {
    emit_story(sb_node, story);
  }
  XmlNode& stop_node = sb_node.child("StopTrigger");
  for (const auto& trigger : sorted(o_.objects_of(storyboard, "has_stop_trigger"))) {
    mark(trigger);
    emit_trigger_into(stop_node, trigger);
  }

  check_accounting(root);
  return doc;
}

void Lowering::emit_entity(XmlNode& entities_node, const std::string& entity) {
  mark(entity);
  XmlNode& object = entities_node.child("ScenarioObject");
  object.attr("name", entity);

  const std::string asset = ref(entity, "has_asset");
  const std::string blueprint = lex(asset, "blueprint_id");
  const AssetDef* def = assets_.find(blueprint);
  if (!def) {
    throw Error(ErrorCode::UnknownName, "asset '" + blueprint + "' is not in the manifest");
  }

  if (o_.individual_is_a(entity, "Vehicle") || o_.individual_is_a(entity, "Bicycle")) {
    XmlNode& vehicle = object.child("Vehicle");
    vehicle.attr("name", blueprint).attr("vehicleCategory", lex(asset, "asset_category"));
    emit_bounding_box(vehicle, entity, *def);
    vehicle.child("Performance")
        .attr("maxAcceleration", "10")
        .attr("maxDeceleration", "10")
        .attr("maxSpeed", "69.444");
    XmlNode& axles = vehicle.child("Axles");
    axles.child("FrontAxle")
        .attr("maxSteering", "0.5236")
        .attr("positionX", "2.9")
        .attr("positionZ", "0.33")
        .attr("trackWidth", "1.8")
        .attr("wheelDiameter", "0.66");
    axles.child("RearAxle")
        .attr("maxSteering", "0")
        .attr("positionX", "0")
        .attr("positionZ", "0.33")
        .attr("trackWidth", "1.8")
        .attr("wheelDiameter", "0.66");
    vehicle.child("Properties");
  } else if (o_.individual_is_a(entity, "Pedestrian")) {
    XmlNode& pedestrian = object.child("Pedestrian");
    pedestrian.attr("mass", canonical_double(def->mass.value_or(80.0)))
        .attr("model", blueprint)
        .attr("name", blueprint)
        .attr("pedestrianCategory", "pedestrian");
    emit_bounding_box(pedestrian, entity, *def);
    pedestrian.child("Properties");
  } else if (o_.individual_is_a(entity, "Misc")) {
    XmlNode& misc = object.child("MiscObject");
    misc.attr("mass", canonical_double(def->mass.value_or(100.0)))
        .attr("miscObjectCategory", "obstacle")
        .attr("name", blueprint);
    emit_bounding_box(misc, entity, *def);
    misc.child("Properties");
  } else {
    throw Error(ErrorCode::UnloweredIndividual,
                "entity '" + entity + "' of class " + concrete_class(entity) +
                    " has no OpenSCENARIO mapping");
  }
}

void Lowering::emit_bounding_box(XmlNode& parent, const std::string& entity, const AssetDef& def) {
  XmlNode& bb = parent.child("BoundingBox");
  if (auto box = o_.object_of(entity, "has_bounding_box")) {
    bb.child("Center")
        .attr("x", lex(*box, "bb_center_x"))
        .attr("y", lex(*box, "bb_center_y"))
        .attr("z", lex(*box, "bb_center_z"));
    bb.child("Dimensions")
        .attr("height", lex(*box, "bb_height"))
        .attr("length", lex(*box, "bb_length"))
        .attr("width", lex(*box, "bb_width"));
  } else {
    bb.child("Center").attr("x", "0").attr("y", "0").attr("z", canonical_double(def.height / 2.0));
    bb.child("Dimensions")
        .attr("height", canonical_double(def.height))
        .attr("length", canonical_double(def.length))
        .attr("width", canonical_double(def.width));
  }
}

void Lowering::emit_init(XmlNode& storyboard_node, const std::string& init) {
  mark(init);
  XmlNode& actions = storyboard_node.child("Init").child("Actions");
  // canonical order: global actions first, then one Private block per entity
  // in entity name order; inside a block teleports precede the rest so
  // placement happens before motion whatever the authoring order was
  std::vector<std::string> global;
  std::map<std::string, std::vector<std::string>> per_entity;
  for (const auto& action : o_.objects_of(init, "has_init_action")) {
    if (o_.individual_is_a(action, "GlobalAction")) {
      global.push_back(action);
    } else {
      per_entity[ref(action, "applies_to")].push_back(action);
    }
  }
  for (const auto& action : sorted(global)) emit_concrete_action(actions, action);
  for (auto& [entity, list] : per_entity) {
    XmlNode& block = actions.child("Private");
    block.attr("entityRef", entity);
    std::sort(list.begin(), list.end(), [&](const std::string& a, const std::string& b) {
      bool teleport_a = concrete_class(a) == "TeleportAction";
      bool teleport_b = concrete_class(b) == "TeleportAction";
      if (teleport_a != teleport_b) return teleport_a;
      return a < b;
    });
    for (const auto& action : list) emit_concrete_action(block, action);
  }
}

void Lowering::emit_story(XmlNode& storyboard_node, const std::string& story) {
  mark(story);
  XmlNode& story_node = storyboard_node.child("Story");
  story_node.attr("name", story);
  for (const auto& act : sorted(o_.objects_of(story, "has_act"))) emit_act(story_node, act);
}

void Lowering::emit_act(XmlNode& story_node, const std::string& act) {
  mark(act);
  XmlNode& act_node = story_node.child("Act");
  act_node.attr("name", act);
  for (const auto& group : sorted(o_.objects_of(act, "has_maneuver_group"))) {
    emit_maneuver_group(act_node, group);
  }
  XmlNode& start_node = act_node.child("StartTrigger");
  for (const auto& trigger : sorted(o_.objects_of(act, "has_start_trigger"))) {
    mark(trigger);
    emit_trigger_into(start_node, trigger);
  }
  auto stops = sorted(o_.objects_of(act, "has_stop_trigger"));
  if (!stops.empty()) {
    XmlNode& stop_node = act_node.child("StopTrigger");
    for (const auto& trigger : stops) {
      mark(trigger);
      emit_trigger_into(stop_node, trigger);
    }
  }
}

void Lowering::emit_maneuver_group(XmlNode& act_node, const std::string& group) {
  mark(group);
  XmlNode& group_node = act_node.child("ManeuverGroup");
  group_node.attr("maximumExecutionCount", "1").attr("name", group);
  XmlNode& actors = group_node.child("Actors");
  actors.attr("selectTriggeringEntities", "false");
  for (const auto& entity : sorted(o_.objects_of(group, "has_actor"))) {
    actors.child("EntityRef").attr("entityRef", entity);
  }
  for (const auto& maneuver : sorted(o_.objects_of(group, "has_maneuver"))) {
    mark(maneuver);
    XmlNode& maneuver_node = group_node.child("Maneuver");
    maneuver_node.attr("name", maneuver);
    for (const auto& event : sorted(o_.objects_of(maneuver, "has_event"))) {
      emit_event(maneuver_node, event);
    }
  }
}

void Lowering::emit_event(XmlNode& maneuver_node, const std::string& event) {
  mark(event);
  XmlNode& event_node = maneuver_node.child("Event");
  event_node.attr("name", event).attr("priority", ref(event, "has_priority"));
  for (const auto& wrapper : sorted(o_.objects_of(event, "has_action"))) {
    mark(wrapper);
    XmlNode& action_node = event_node.child("Action");
    action_node.attr("name", wrapper);
    emit_concrete_action(action_node, ref(wrapper, "has_concrete_action"));
  }
  XmlNode& start_node = event_node.child("StartTrigger");
  for (const auto& trigger : sorted(o_.objects_of(event, "has_start_trigger"))) {
    mark(trigger);
    emit_trigger_into(start_node, trigger);
  }
}

void Lowering::emit_concrete_action(XmlNode& slot, const std::string& action) {
  mark(action);
  const std::string& cls = concrete_class(action);
  if (cls == "TeleportAction") {
    emit_position(slot.child("PrivateAction").child("TeleportAction").child("Position"),
                  ref(action, "has_position"));
  } else if (cls == "SpeedAction") {
    XmlNode& speed = slot.child("PrivateAction").child("LongitudinalAction").child("SpeedAction");
    emit_dynamics(speed, "SpeedActionDynamics", ref(action, "has_dynamics"));
    speed.child("SpeedActionTarget")
        .child("AbsoluteTargetSpeed")
        .attr("value", lex(action, "target_speed"));
  } else if (cls == "RelativeLaneChangeAction") {
    XmlNode& change = slot.child("PrivateAction").child("LateralAction").child("LaneChangeAction");
    emit_dynamics(change, "LaneChangeActionDynamics", ref(action, "has_dynamics"));
    change.child("LaneChangeTarget")
        .child("RelativeTargetLane")
        .attr("entityRef", ref(action, "has_reference_entity"))
        .attr("value", lex(action, "lane_offset"));
  } else if (cls == "EnvironmentAction") {
    emit_environment(slot.child("GlobalAction").child("EnvironmentAction"),
                     ref(action, "has_environment"));
  } else {
    throw Error(ErrorCode::UnloweredIndividual,
                "action '" + action + "' of class " + cls + " has no OpenSCENARIO mapping");
  }
}

void Lowering::emit_position(XmlNode& holder, const std::string& position) {
  mark(position);
  const std::string& cls = concrete_class(position);
  if (cls == "WorldPosition") {
    holder.child("WorldPosition")
        .attr("h", lex(position, "pos_heading"))
        .attr("x", lex(position, "pos_x"))
        .attr("y", lex(position, "pos_y"))
        .attr("z", lex(position, "pos_z"));
  } else if (cls == "RelativeObjectPosition") {
    holder.child("RelativeObjectPosition")
        .attr("dx", lex(position, "delta_x"))
        .attr("dy", lex(position, "delta_y"))
        .attr("dz", lex(position, "delta_z"))
        .attr("entityRef", ref(position, "has_reference_entity"));
  } else {
    throw Error(ErrorCode::UnloweredIndividual,
                "position '" + position + "' of class " + cls + " has no OpenSCENARIO mapping");
  }
}

void Lowering::emit_dynamics(XmlNode& parent, const char* element, const std::string& dynamics) {
  mark(dynamics);
  parent.child(element)
      .attr("dynamicsDimension", ref(dynamics, "has_dynamics_dimension"))
      .attr("dynamicsShape", ref(dynamics, "has_dynamics_shape"))
      .attr("value", lex(dynamics, "dynamics_value"));
}

void Lowering::emit_environment(XmlNode& parent, const std::string& env) {
  mark(env);
  XmlNode& env_node = parent.child("Environment");
  env_node.attr("name", env);
  const std::string tod = ref(env, "has_time_of_day");
  mark(tod);
  env_node.child("TimeOfDay")
      .attr("animation", lex(tod, "animation"))
      .attr("dateTime", lex(tod, "date_time"));
  const std::string weather = ref(env, "has_weather");
  mark(weather);
  XmlNode& weather_node = env_node.child("Weather");
  weather_node.attr("cloudState", ref(weather, "has_cloud_state"));
  const std::string sun = ref(weather, "has_sun");
  mark(sun);
  weather_node.child("Sun")
      .attr("azimuth", lex(sun, "azimuth"))
      .attr("elevation", lex(sun, "elevation"))
      .attr("intensity", lex(sun, "intensity"));
  const std::string fog = ref(weather, "has_fog");
  mark(fog);
  weather_node.child("Fog").attr("visualRange", lex(fog, "visual_range"));
  const std::string precipitation = ref(weather, "has_precipitation");
  mark(precipitation);
  weather_node.child("Precipitation")
      .attr("intensity", lex(precipitation, "precipitation_intensity"))
      .attr("precipitationType", ref(precipitation, "has_precipitation_type"));
  const std::string road = ref(env, "has_road_condition");
  mark(road);
  env_node.child("RoadCondition").attr("frictionScaleFactor", lex(road, "friction_scale"));
}

void Lowering::emit_trigger_into(XmlNode& trigger_node, const std::string& trigger) {
  XmlNode& group_node = trigger_node.child("ConditionGroup");
  for (const auto& condition : sorted(o_.objects_of(trigger, "has_condition"))) {
    emit_condition(group_node, condition);
  }
}

void Lowering::emit_condition(XmlNode& group_node, const std::string& condition) {
  mark(condition);
  XmlNode& cond_node = group_node.child("Condition");
  cond_node.attr("conditionEdge", ref(condition, "has_condition_edge"))
      .attr("delay", lex(condition, "condition_delay"))
      .attr("name", condition);
  const std::string& cls = concrete_class(condition);
  if (cls == "SimulationTimeCondition") {
    cond_node.child("ByValueCondition")
        .child("SimulationTimeCondition")
        .attr("rule", ref(condition, "has_rule"))
        .attr("value", lex(condition, "condition_value"));
  } else if (cls == "StoryboardElementStateCondition") {
    cond_node.child("ByValueCondition")
        .child("StoryboardElementStateCondition")
        .attr("state", ref(condition, "has_element_state"))
        .attr("storyboardElementRef", ref(condition, "has_storyboard_element"))
        .attr("storyboardElementType", ref(condition, "has_storyboard_element_type"));
  } else if (cls == "TraveledDistanceCondition" || cls == "RelativeDistanceCondition") {
    XmlNode& by_entity = cond_node.child("ByEntityCondition");
    XmlNode& triggering = by_entity.child("TriggeringEntities");
    triggering.attr("triggeringEntitiesRule", ref(condition, "has_triggering_entities_rule"));
    for (const auto& entity : sorted(o_.objects_of(condition, "has_triggering_entity"))) {
      triggering.child("EntityRef").attr("entityRef", entity);
    }
    XmlNode& entity_cond = by_entity.child("EntityCondition");
    if (cls == "TraveledDistanceCondition") {
      entity_cond.child("TraveledDistanceCondition").attr("value", lex(condition, "condition_value"));
    } else {
      entity_cond.child("RelativeDistanceCondition")
          .attr("entityRef", ref(condition, "has_reference_entity"))
          .attr("freespace", lex(condition, "freespace"))
          .attr("relativeDistanceType", ref(condition, "has_relative_distance_type"))
          .attr("rule", ref(condition, "has_rule"))
          .attr("value", lex(condition, "condition_value"));
    }
  } else {
    throw Error(ErrorCode::UnloweredIndividual,
                "condition '" + condition + "' of class " + cls + " has no OpenSCENARIO mapping");
  }
}

void Lowering::check_accounting(const std::string& root) const {
  // every scenario-authored individual the root can reach must have produced
  // a node; assets, towns, and corner-case tags carry no XML footprint
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& a : o_.assertions()) {
    if (a.is_object) adjacency[a.subject].push_back(a.object);
  }
  std::set<std::string> reached{root};
  std::deque<std::string> frontier{root};
  while (!frontier.empty()) {
    std::string current = frontier.front();
    frontier.pop_front();
    auto it = adjacency.find(current);
    if (it == adjacency.end()) continue;
    for (const auto& next : it->second) {
      if (reached.insert(next).second) frontier.push_back(next);
    }
  }
  for (const auto& name : reached) {
    if (o_.individual(name).origin != Origin::Scenario) continue;
    if (mapped_.count(name)) continue;
    if (o_.individual_is_a(name, "Asset") || o_.individual_is_a(name, "Town") ||
        o_.individual_is_a(name, "CornerCase")) {
      continue;
    }
    throw Error(ErrorCode::UnloweredIndividual,
                "'" + name + "' is reachable but produced no node");
  }
}

// -- document checks ------------------------------------------------------------

// Walks the tree and collects violations against the supported element
// shapes. Elements outside the subset are reported by their parent's checks.
class Checker {
public:
  std::vector<XoscViolation> out;

  void check(const XmlNode& node, const std::string& path);

private:
  void report(const std::string& path, std::string rule) { out.push_back({path, std::move(rule)}); }

  void need_attrs(const XmlNode& node, const std::string& path,
                  std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
      if (!node.find_attr(key)) {
        report(path, std::string("missing required attribute '") + key + "'");
      }
    }
  }

  static std::size_t count_children(const XmlNode& node, const char* name) {
    std::size_t n = 0;
    for (const auto& c : node.children) {
      if (c.name == name) ++n;
    }
    return n;
  }

  // exactly one child, drawn from `allowed`
  void choice_one(const XmlNode& node, const std::string& path,
                  std::initializer_list<const char*> allowed, const char* what) {
    if (node.children.size() != 1) {
      report(path, std::string("expected exactly one ") + what + ", found " +
                       std::to_string(node.children.size()));
    }
    for (const auto& c : node.children) {
      bool known = false;
      for (const char* name : allowed) {
        if (c.name == name) known = true;
      }
      if (!known) report(path, std::string("unknown ") + what + " element '" + c.name + "'");
    }
  }

  // all children named `name`, at least `min_count` of them
  void only(const XmlNode& node, const std::string& path, const char* name,
            std::size_t min_count) {
    std::size_t n = 0;
    for (const auto& c : node.children) {
      if (c.name == name) {
        ++n;
      } else {
        report(path, std::string("unexpected element '") + c.name + "'");
      }
    }
    if (n < min_count) {
      report(path, std::string("expected at least ") + std::to_string(min_count) + " " + name +
                       ", found " + std::to_string(n));
    }
  }
};

void Checker::check(const XmlNode& n, const std::string& path) {
  if (n.name == "OpenSCENARIO") {
    for (const char* child : {"FileHeader", "RoadNetwork", "Entities", "Storyboard"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "FileHeader") {
    need_attrs(n, path, {"author", "date", "description", "revMajor", "revMinor"});
  } else if (n.name == "RoadNetwork") {
    if (count_children(n, "LogicFile") != 1) report(path, "expected exactly one LogicFile");
  } else if (n.name == "LogicFile") {
    need_attrs(n, path, {"filepath"});
  } else if (n.name == "Entities") {
    only(n, path, "ScenarioObject", 0);
  } else if (n.name == "ScenarioObject") {
    need_attrs(n, path, {"name"});
    choice_one(n, path, {"Vehicle", "Pedestrian", "MiscObject"}, "entity object");
  } else if (n.name == "Vehicle") {
    need_attrs(n, path, {"name", "vehicleCategory"});
    for (const char* child : {"BoundingBox", "Performance", "Axles", "Properties"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "Pedestrian") {
    need_attrs(n, path, {"mass", "model", "name", "pedestrianCategory"});
    for (const char* child : {"BoundingBox", "Properties"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "MiscObject") {
    need_attrs(n, path, {"mass", "miscObjectCategory", "name"});
    for (const char* child : {"BoundingBox", "Properties"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "BoundingBox") {
    for (const char* child : {"Center", "Dimensions"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "Center") {
    need_attrs(n, path, {"x", "y", "z"});
  } else if (n.name == "Dimensions") {
    need_attrs(n, path, {"height", "length", "width"});
  } else if (n.name == "Performance") {
    need_attrs(n, path, {"maxAcceleration", "maxDeceleration", "maxSpeed"});
  } else if (n.name == "Axles") {
    for (const char* child : {"FrontAxle", "RearAxle"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "FrontAxle" || n.name == "RearAxle") {
    need_attrs(n, path, {"maxSteering", "positionX", "positionZ", "trackWidth", "wheelDiameter"});
  } else if (n.name == "Storyboard") {
    std::size_t inits = count_children(n, "Init");
    std::size_t stories = count_children(n, "Story");
    std::size_t stops = count_children(n, "StopTrigger");
    if (inits != 1) report(path, "expected exactly one Init");
    if (stories == 0) report(path, "expected at least one Story");
    if (stops != 1) report(path, "expected exactly one StopTrigger");
    for (const auto& c : n.children) {
      if (c.name != "Init" && c.name != "Story" && c.name != "StopTrigger") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
    if (inits == 1 && stories > 0 && stops == 1 &&
        (n.children.front().name != "Init" || n.children.back().name != "StopTrigger")) {
      report(path, "children must run Init, Story.., StopTrigger");
    }
  } else if (n.name == "Init") {
    if (count_children(n, "Actions") != 1) report(path, "expected exactly one Actions");
  } else if (n.name == "Actions") {
    for (const auto& c : n.children) {
      if (c.name != "GlobalAction" && c.name != "Private") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
  } else if (n.name == "Private") {
    need_attrs(n, path, {"entityRef"});
    only(n, path, "PrivateAction", 1);
  } else if (n.name == "PrivateAction") {
    choice_one(n, path, {"TeleportAction", "LongitudinalAction", "LateralAction"},
               "private action");
  } else if (n.name == "GlobalAction") {
    choice_one(n, path, {"EnvironmentAction"}, "global action");
  } else if (n.name == "TeleportAction") {
    if (count_children(n, "Position") != 1) report(path, "expected exactly one Position");
  } else if (n.name == "Position") {
    choice_one(n, path, {"WorldPosition", "RelativeObjectPosition"}, "position");
  } else if (n.name == "WorldPosition") {
    need_attrs(n, path, {"x", "y"});
  } else if (n.name == "RelativeObjectPosition") {
    need_attrs(n, path, {"dx", "dy", "entityRef"});
  } else if (n.name == "LongitudinalAction") {
    choice_one(n, path, {"SpeedAction"}, "longitudinal action");
  } else if (n.name == "SpeedAction") {
    for (const char* child : {"SpeedActionDynamics", "SpeedActionTarget"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "SpeedActionDynamics" || n.name == "LaneChangeActionDynamics") {
    need_attrs(n, path, {"dynamicsDimension", "dynamicsShape", "value"});
  } else if (n.name == "SpeedActionTarget") {
    choice_one(n, path, {"AbsoluteTargetSpeed"}, "speed target");
  } else if (n.name == "AbsoluteTargetSpeed") {
    need_attrs(n, path, {"value"});
  } else if (n.name == "LateralAction") {
    choice_one(n, path, {"LaneChangeAction"}, "lateral action");
  } else if (n.name == "LaneChangeAction") {
    for (const char* child : {"LaneChangeActionDynamics", "LaneChangeTarget"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "LaneChangeTarget") {
    choice_one(n, path, {"RelativeTargetLane"}, "lane change target");
  } else if (n.name == "RelativeTargetLane") {
    need_attrs(n, path, {"entityRef", "value"});
  } else if (n.name == "EnvironmentAction") {
    choice_one(n, path, {"Environment"}, "environment");
  } else if (n.name == "Environment") {
    need_attrs(n, path, {"name"});
    for (const auto& c : n.children) {
      if (c.name != "TimeOfDay" && c.name != "Weather" && c.name != "RoadCondition") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
  } else if (n.name == "TimeOfDay") {
    need_attrs(n, path, {"animation", "dateTime"});
  } else if (n.name == "Weather") {
    need_attrs(n, path, {"cloudState"});
    for (const auto& c : n.children) {
      if (c.name != "Sun" && c.name != "Fog" && c.name != "Precipitation") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
  } else if (n.name == "Sun") {
    need_attrs(n, path, {"azimuth", "elevation", "intensity"});
  } else if (n.name == "Fog") {
    need_attrs(n, path, {"visualRange"});
  } else if (n.name == "Precipitation") {
    need_attrs(n, path, {"intensity", "precipitationType"});
  } else if (n.name == "RoadCondition") {
    need_attrs(n, path, {"frictionScaleFactor"});
  } else if (n.name == "Story") {
    need_attrs(n, path, {"name"});
    only(n, path, "Act", 1);
  } else if (n.name == "Act") {
    need_attrs(n, path, {"name"});
    std::size_t groups = count_children(n, "ManeuverGroup");
    std::size_t starts = count_children(n, "StartTrigger");
    std::size_t stops = count_children(n, "StopTrigger");
    if (groups == 0) report(path, "expected at least one ManeuverGroup");
    if (starts != 1) report(path, "expected exactly one StartTrigger");
    if (stops > 1) report(path, "expected at most one StopTrigger");
    for (const auto& c : n.children) {
      if (c.name != "ManeuverGroup" && c.name != "StartTrigger" && c.name != "StopTrigger") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
  } else if (n.name == "ManeuverGroup") {
    need_attrs(n, path, {"maximumExecutionCount", "name"});
    if (count_children(n, "Actors") != 1) report(path, "expected exactly one Actors");
    if (count_children(n, "Maneuver") == 0) report(path, "expected at least one Maneuver");
    for (const auto& c : n.children) {
      if (c.name != "Actors" && c.name != "Maneuver") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
  } else if (n.name == "Actors") {
    need_attrs(n, path, {"selectTriggeringEntities"});
    only(n, path, "EntityRef", 0);
  } else if (n.name == "EntityRef") {
    need_attrs(n, path, {"entityRef"});
  } else if (n.name == "Maneuver") {
    need_attrs(n, path, {"name"});
    only(n, path, "Event", 1);
  } else if (n.name == "Event") {
    need_attrs(n, path, {"name", "priority"});
    std::size_t actions = count_children(n, "Action");
    std::size_t starts = count_children(n, "StartTrigger");
    if (actions == 0) report(path, "expected at least one Action");
    if (starts != 1) report(path, "expected exactly one StartTrigger");
    for (const auto& c : n.children) {
      if (c.name != "Action" && c.name != "StartTrigger") {
        report(path, "unexpected element '" + c.name + "'");
      }
    }
    if (actions > 0 && starts == 1 && n.children.back().name != "StartTrigger") {
      report(path, "the StartTrigger must close the event");
    }
  } else if (n.name == "Action") {
    need_attrs(n, path, {"name"});
    choice_one(n, path, {"GlobalAction", "PrivateAction"}, "action");
  } else if (n.name == "StartTrigger") {
    only(n, path, "ConditionGroup", 1);
  } else if (n.name == "StopTrigger") {
    only(n, path, "ConditionGroup", 0);
  } else if (n.name == "ConditionGroup") {
    only(n, path, "Condition", 1);
  } else if (n.name == "Condition") {
    need_attrs(n, path, {"conditionEdge", "delay", "name"});
    choice_one(n, path, {"ByEntityCondition", "ByValueCondition"}, "condition body");
  } else if (n.name == "ByValueCondition") {
    choice_one(n, path, {"SimulationTimeCondition", "StoryboardElementStateCondition"},
               "value condition");
  } else if (n.name == "SimulationTimeCondition") {
    need_attrs(n, path, {"rule", "value"});
  } else if (n.name == "StoryboardElementStateCondition") {
    need_attrs(n, path, {"state", "storyboardElementRef", "storyboardElementType"});
  } else if (n.name == "ByEntityCondition") {
    for (const char* child : {"TriggeringEntities", "EntityCondition"}) {
      if (count_children(n, child) != 1) {
        report(path, std::string("expected exactly one ") + child);
      }
    }
  } else if (n.name == "TriggeringEntities") {
    need_attrs(n, path, {"triggeringEntitiesRule"});
    only(n, path, "EntityRef", 1);
  } else if (n.name == "EntityCondition") {
    choice_one(n, path, {"TraveledDistanceCondition", "RelativeDistanceCondition"},
               "entity condition");
  } else if (n.name == "TraveledDistanceCondition") {
    need_attrs(n, path, {"value"});
  } else if (n.name == "RelativeDistanceCondition") {
    need_attrs(n, path, {"entityRef", "freespace", "relativeDistanceType", "rule", "value"});
  }

  std::map<std::string, std::size_t> seen;
  for (const auto& c : n.children) {
    std::size_t index = ++seen[c.name];
    std::string child_path = path + "/" + c.name;
    if (count_children(n, c.name.c_str()) > 1) {
      child_path += "[" + std::to_string(index) + "]";
    }
    check(c, child_path);
  }
}

}  // namespace

XoscDocument lower(const Ontology& scenario, const AssetManifest& assets) {
  return Lowering(scenario, assets).run();
}

std::string emit_xml(const XoscDocument& doc, const std::optional<std::string>& fixed_date) {
  XmlNode root = doc.root;
  if (XmlNode* header = root.find("FileHeader")) {
    header->attr("date", fixed_date ? *fixed_date : now_iso8601());
  }
  return emit_document(root);
}

std::vector<XoscViolation> validate_xosc(const XoscDocument& doc) {
  Checker checker;
  if (doc.root.name != "OpenSCENARIO") {
    checker.out.push_back({"/", "the document root must be OpenSCENARIO"});
    return checker.out;
  }
  checker.check(doc.root, "/OpenSCENARIO");
  return checker.out;
}

}  // namespace ontoscen
