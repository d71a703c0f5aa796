#include "ontoscen/catalog.hpp"

#include <functional>
#include <map>

#include "ontoscen/builder.hpp"
#include "ontoscen/errors.hpp"
#include "ontoscen/fusion.hpp"
#include "ontoscen/master.hpp"

namespace ontoscen {

namespace {

// Common scaffold around every entry. All entries drive the same ego
// template (world teleport + 13.9 m/s cruise); fusing any two of them then
// carries both inputs' init actions, because identical fingerprints are
// never dropped.
struct Frame {
  std::string storyboard;
  std::string init;
  std::string ego;
  std::string story;
  std::string act;
  std::string group;
  std::string maneuver;  // empty when the entry lays out its own maneuvers
};

struct FrameOptions {
  bool base_maneuver = true;
  // act start: simulation-start constant, or a custom delay in seconds
  std::optional<double> act_start_delay;
};

Frame open_frame(ScenarioBuilder& b, const FrameOptions& opt = {}) {
  Frame f;
  f.storyboard = b.structural_element(Structural::Storyboard, b.root());
  f.init = b.structural_element(Structural::Init, f.storyboard);
  f.ego = b.new_entity(EntityKind::EgoVehicle);
  b.add_init_action(f.init, b.default_environment_action());
  b.add_init_action(f.init, b.new_action(TeleportToWorld{f.ego, 100.0, 200.0, 0.3, 1.57}));
  b.add_init_action(f.init, b.new_action(ChangeSpeed{
                                f.ego, 13.9, b.new_transition_dynamics("linear", "time", 5.0)}));
  f.story = b.structural_element(Structural::Story, f.storyboard);
  f.act = b.structural_element(Structural::Act, f.story);
  if (opt.act_start_delay) {
    b.new_trigger(TriggerKind::Start, {b.new_condition(SimulationTime{*opt.act_start_delay})},
                  f.act);
  } else {
    b.new_trigger(TriggerKind::Start, {"sim_start_condition"}, f.act);
  }
  f.group = b.structural_element(Structural::ManeuverGroup, f.act);
  if (opt.base_maneuver) f.maneuver = b.structural_element(Structural::Maneuver, f.group);
  return f;
}

// (a) ordinary drive; the dead pixels live in the camera directive
Ontology build_a() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  b.add_actor(f.group, f.ego);
  std::string ev = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(ev, b.new_action(ChangeSpeed{
                          f.ego, 0.0, b.new_transition_dynamics("linear", "time", 2.0)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(SimulationTime{4.0})}, ev);
  b.new_trigger(TriggerKind::Stop, {b.new_condition(ElementState{ev})}, f.storyboard);
  b.set_description("ordinary cruise; the camera develops dead pixels in post-processing");
  return b.finalize();
}

// (b) fog bank: visibility collapses to 10 m once the ego has traveled 50 m
Ontology build_b() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  b.add_actor(f.group, f.ego);
  std::string ev = b.structural_element(Structural::Event, f.maneuver);
  EnvironmentSpec fog;
  fog.cloud_state = "overcast";
  fog.sun_elevation = 0.52;
  fog.sun_intensity = 20000.0;
  fog.fog_visual_range = 10.0;
  b.attach_action(ev, b.new_action(ChangeEnvironment{b.new_environment(fog)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(TraveledDistance{f.ego, 50.0})}, ev,
                std::string("indiv_DistanceStartTrigger"));
  b.new_trigger(TriggerKind::Stop, {b.new_condition(ElementState{ev})}, f.storyboard);
  b.set_corner_case("content", "domain", "sudden weather change");
  b.set_description("a dense fog bank rolls in after the ego has traveled 50 m");
  return b.finalize();
}

// (c) a vending machine relocates onto the lane just ahead of the ego
Ontology build_c() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  std::string machine = b.new_entity(EntityKind::Misc, "static.prop.vendingmachine");
  b.add_init_action(f.init, b.new_action(TeleportRelative{machine, f.ego, 60.0, 4.0, 0.0}));
  b.add_actor(f.group, machine);
  std::string ev = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(ev, b.new_action(TeleportRelative{machine, f.ego, 20.0, 0.0, 0.0}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(RelativeDistance{f.ego, machine, 25.0})},
                ev);
  b.new_trigger(TriggerKind::Stop, {b.new_condition(SimulationTime{20.0})}, f.act);
  b.new_trigger(TriggerKind::Stop, {b.new_condition(ElementState{ev})}, f.storyboard);
  b.set_corner_case("content", "object", "unknown static object on the road");
  b.set_description("a vending machine appears on the driving lane ahead of the ego");
  return b.finalize();
}

// (d) stampede: four runners burst across the road out of a strolling crowd
Ontology build_d() {
  ScenarioBuilder b(build_master(), "Town01");
  FrameOptions opt;
  opt.base_maneuver = false;
  opt.act_start_delay = 1.0;
  Frame f = open_frame(b, opt);

  const char* kWalkerAssets[] = {"walker.pedestrian.0001", "walker.pedestrian.0002",
                                 "walker.pedestrian.0003"};
  for (int i = 0; i < 4; ++i) {
    std::string runner = b.new_entity(EntityKind::Pedestrian, kWalkerAssets[i % 2]);
    b.add_init_action(
        f.init, b.new_action(TeleportRelative{runner, f.ego, 35.0 + 6.0 * i, -5.5, 0.0}));
    b.add_actor(f.group, runner);
    std::string maneuver = b.structural_element(Structural::Maneuver, f.group);
    std::string ev = b.structural_element(Structural::Event, maneuver);
    b.attach_action(ev, b.new_action(ChangeSpeed{
                            runner, 4.2, b.new_transition_dynamics("step", "time", 0.0)}));
    b.new_trigger(TriggerKind::Start,
                  {b.new_condition(SimulationTime{1.5 + 0.5 * i}),
                   b.new_condition(RelativeDistance{runner, f.ego, 30.0})},
                  ev);
  }
  for (int i = 0; i < 8; ++i) {
    std::string walker = b.new_entity(EntityKind::Pedestrian, kWalkerAssets[i % 3]);
    b.add_init_action(
        f.init, b.new_action(TeleportRelative{walker, f.ego, 15.0 + 4.0 * i, 4.5, 0.0}));
    b.add_init_action(f.init, b.new_action(ChangeSpeed{
                                  walker, 1.4, b.new_transition_dynamics("step", "time", 0.0)}));
  }
  b.set_corner_case("content", "scene", "collective anomaly: running pedestrians");
  b.set_description("a crowd of pedestrians breaks into a run across the road");
  return b.finalize();
}

// (e) seven traffic signs strewn across the lane as if fallen off a truck
Ontology build_e() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  b.add_actor(f.group, f.ego);
  std::string first_sign;
  for (int i = 0; i < 7; ++i) {
    std::string sign = b.new_entity(
        EntityKind::Misc, i % 2 == 0 ? "static.prop.streetsign" : "static.prop.streetsign01");
    if (i == 0) first_sign = sign;
    b.add_init_action(f.init, b.new_action(TeleportRelative{
                                  sign, f.ego, 40.0 + 7.0 * i, i % 2 == 0 ? 1.2 : -1.2, 0.0}));
  }
  std::string ev = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(ev, b.new_action(ChangeSpeed{
                          f.ego, 0.0, b.new_transition_dynamics("linear", "time", 2.5)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(RelativeDistance{f.ego, first_sign, 20.0})},
                ev);
  b.new_trigger(TriggerKind::Stop, {b.new_condition(SimulationTime{30.0})}, f.act);
  b.new_trigger(TriggerKind::Stop, {b.new_condition(ElementState{ev})}, f.storyboard);
  b.set_corner_case("content", "scene", "contextual anomaly: traffic signs on the road");
  b.set_description("traffic signs litter the driving lane as if fallen from a transporter");
  return b.finalize();
}

// (f) a cyclist rides against traffic in the opposite lane, then swerves in
Ontology build_f() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  std::string bike = b.new_entity(EntityKind::Bicycle, "vehicle.bh.crossbike");
  b.add_init_action(f.init, b.new_action(TeleportRelative{bike, f.ego, 25.0, 3.5, 0.0}));
  b.add_init_action(f.init, b.new_action(ChangeSpeed{
                                bike, 8.3, b.new_transition_dynamics("step", "time", 0.0)}));
  b.add_actor(f.group, bike);
  std::string ev = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(ev, b.new_action(RelativeLaneChange{
                          bike, f.ego, 0, b.new_transition_dynamics("sinusoidal", "time", 3.0)}));
  b.new_trigger(TriggerKind::Start,
                {b.new_condition(SimulationTime{4.0}),
                 b.new_condition(RelativeDistance{bike, f.ego, 20.0})},
                ev);
  b.new_trigger(TriggerKind::Stop, {b.new_condition(ElementState{ev})}, f.storyboard);
  b.set_corner_case("temporal", "scenario", "novel scenario: oncoming cyclist");
  b.set_description("a cyclist rides against traffic in the opposite lane and swerves in");
  return b.finalize();
}

// (g) close cut-in: a car squeezes in ahead of the ego and brakes hard
Ontology build_g() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  std::string car = b.new_entity(EntityKind::Vehicle, "vehicle.audi.tt");
  b.add_init_action(f.init, b.new_action(TeleportRelative{car, f.ego, 18.0, 3.5, 0.0}));
  b.add_init_action(f.init, b.new_action(ChangeSpeed{
                                car, 16.7, b.new_transition_dynamics("step", "time", 0.0)}));
  b.add_actor(f.group, car);
  b.add_actor(f.group, f.ego);

  std::string cut_in = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(cut_in,
                  b.new_action(RelativeLaneChange{
                      car, f.ego, 0, b.new_transition_dynamics("sinusoidal", "time", 2.0)}));
  b.new_trigger(TriggerKind::Start,
                {b.new_condition(SimulationTime{3.0}),
                 b.new_condition(RelativeDistance{car, f.ego, 12.0})},
                cut_in);

  std::string hard_brake = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(hard_brake, b.new_action(ChangeSpeed{
                                  car, 4.2, b.new_transition_dynamics("linear", "time", 2.0)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(ElementState{cut_in})}, hard_brake);

  std::string react = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(react, b.new_action(ChangeSpeed{
                             f.ego, 0.0, b.new_transition_dynamics("linear", "time", 3.0)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(ElementState{hard_brake})}, react);

  b.set_corner_case("temporal", "scenario", "risky scenario: close cut-in");
  b.set_description("a car cuts in closely ahead of the ego and brakes hard");
  return b.finalize();
}

// (h) a pedestrian appears right in front of the ego, forcing a full brake
Ontology build_h() {
  ScenarioBuilder b(build_master(), "Town01");
  Frame f = open_frame(b);
  std::string walker = b.new_entity(EntityKind::Pedestrian, "walker.pedestrian.0003");
  b.add_init_action(f.init, b.new_action(TeleportRelative{walker, f.ego, 50.0, 4.0, 0.0}));
  b.add_actor(f.group, walker);
  b.add_actor(f.group, f.ego);

  std::string appear = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(appear, b.new_action(TeleportRelative{walker, f.ego, 12.0, 0.5, 0.0}));
  b.new_trigger(TriggerKind::Start,
                {b.new_condition(SimulationTime{2.0}),
                 b.new_condition(TraveledDistance{f.ego, 60.0})},
                appear);

  std::string brake = b.structural_element(Structural::Event, f.maneuver);
  b.attach_action(brake, b.new_action(ChangeSpeed{
                             f.ego, 0.0, b.new_transition_dynamics("linear", "time", 1.5)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(ElementState{appear})}, brake);

  b.new_trigger(TriggerKind::Stop, {b.new_condition(ElementState{brake})}, f.storyboard);
  b.set_corner_case("temporal", "scenario", "anomalous scenario: pedestrian steps in front");
  b.set_description("a pedestrian appears in front of the ego, forcing an emergency brake");
  return b.finalize();
}

Ontology build_i() {
  return fuse({build_catalog_scenario("d"), build_catalog_scenario("f")}).ontology;
}

Ontology build_j() {
  return fuse({build_catalog_scenario("f"), build_catalog_scenario("h")}).ontology;
}

const char* kDirectiveA =
    "EFFECTS/1\n"
    "# ego_camera_front frames (800x600 P6)\n"
    "dead_pixels a_deadpixels.mask\n";

const char* kMaskA =
    "MASK/1\n"
    "800 600\n"
    "120 80\n"
    "121 80\n"
    "122 80\n"
    "400 300\n"
    "401 300\n"
    "640 480\n"
    "777 599\n";

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> kEntries = {
      {"a", "Dead Pixel", "sensor", "hardware",
       "ordinary cruise; the camera develops dead pixels in post-processing", {}, true},
      {"b", "Sudden Weather Change", "content", "domain",
       "a dense fog bank rolls in after the ego has traveled 50 m", {}, false},
      {"c", "Single-Point Anomaly", "content", "object",
       "a vending machine appears on the driving lane ahead of the ego", {}, false},
      {"d", "Collective Anomaly", "content", "scene",
       "a crowd of pedestrians breaks into a run across the road", {}, false},
      {"e", "Contextual Anomaly", "content", "scene",
       "traffic signs litter the driving lane as if fallen from a transporter", {}, false},
      {"f", "Novel Scenario", "temporal", "scenario",
       "a cyclist rides against traffic in the opposite lane and swerves in", {}, false},
      {"g", "Risky Scenario", "temporal", "scenario",
       "a car cuts in closely ahead of the ego and brakes hard", {}, false},
      {"h", "Anomalous Scenario", "temporal", "scenario",
       "a pedestrian appears in front of the ego, forcing an emergency brake", {}, false},
      {"i", "Combined: Collective and Novel Scenario", "", "",
       "fusion of entries d and f", {"d", "f"}, false},
      {"j", "Combined: Novel and Anomalous Scenario", "", "",
       "fusion of entries f and h", {"f", "h"}, false},
  };
  return kEntries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const CatalogEntry& entry : catalog_entries()) {
    if (entry.id == id) return entry;
  }
  throw Error(ErrorCode::UnknownName, "no catalog entry '" + id + "'");
}

Ontology build_catalog_scenario(const std::string& id) {
  static const std::map<std::string, Ontology (*)()> kBuilders = {
      {"a", build_a}, {"b", build_b}, {"c", build_c}, {"d", build_d}, {"e", build_e},
      {"f", build_f}, {"g", build_g}, {"h", build_h}, {"i", build_i}, {"j", build_j},
  };
  auto it = kBuilders.find(id);
  if (it == kBuilders.end()) {
    throw Error(ErrorCode::UnknownName, "no catalog entry '" + id + "'");
  }
  return it->second();
}

std::string catalog_effects_directive(const std::string& id) {
  if (!catalog_entry(id).has_effects) {
    throw Error(ErrorCode::UnknownName, "catalog entry '" + id + "' has no effects directive");
  }
  return kDirectiveA;
}

std::string catalog_pixel_mask(const std::string& id) {
  if (!catalog_entry(id).has_effects) {
    throw Error(ErrorCode::UnknownName, "catalog entry '" + id + "' has no pixel mask");
  }
  return kMaskA;
}

std::string catalog_stats() {
  std::string out = "CATALOG-STATS/1\n";
  for (const CatalogEntry& entry : catalog_entries()) {
    if (entry.has_effects) {
      out += entry.id + " - -\n";
      continue;
    }
    Ontology o = build_catalog_scenario(entry.id);
    std::size_t fresh = 0;
    for (const auto& [name, def] : o.individuals()) {
      (void)name;
      if (def.origin == Origin::Scenario) ++fresh;
    }
    out += entry.id + " " + std::to_string(o.stats().individuals) + " " +
           std::to_string(fresh) + "\n";
  }
  return out;
}

}  // namespace ontoscen
