#include <functional>
#include <string>

#include "doctest.h"
#include "ontoscen/builder.hpp"
#include "ontoscen/catalog.hpp"
#include "ontoscen/master.hpp"
#include "ontoscen/scenario_text.hpp"
#include "test_support.hpp"

using namespace ontoscen;

namespace {

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// the catalog's fog scenario, written in the description language with the
// same creation order as the programmatic build
const char* kFogText = R"(# entry (b): a fog bank rolls in mid-drive
scenario town=Town01 description="a dense fog bank rolls in after the ego has traveled 50 m"
storyboard sb
init ini parent=sb
entity ego kind=ego
init_action init=ini action=default_environment_action
action tele kind=teleport_world entity=ego x=100.0 y=200.0 z=0.3 heading=1.57
init_action init=ini action=tele
dynamics cruise shape=linear dimension=time value=5.0
action cruise_speed kind=speed entity=ego target=13.9 dynamics=cruise
init_action init=ini action=cruise_speed
story st parent=sb
act a parent=st
trigger act_start kind=start attach=a conditions=sim_start_condition
maneuver_group mg parent=a
maneuver man parent=mg
actor group=mg entity=ego
event ev parent=man
environment fog_env cloud_state=overcast sun_elevation=0.52 sun_intensity=20000.0 fog_visual_range=10.0
action fog kind=change_environment environment=fog_env
attach_action event=ev action=fog
condition trav kind=traveled_distance entity=ego value=50.0
trigger fog_start kind=start attach=ev conditions=trav name=indiv_DistanceStartTrigger
condition fog_done kind=element_state element=ev
trigger done kind=stop attach=sb conditions=fog_done
corner_case layer=content level=domain description="sudden weather change"
)";

}  // namespace

TEST_CASE("the fog description file replays the programmatic build exactly") {
  Ontology parsed = parse_scenario_text(kFogText, "fog.scn");
  CHECK(parsed.serialize() == build_catalog_scenario("b").serialize());
}

TEST_CASE("a minimal description equals the same builder calls") {
  const char* text = R"(
scenario town=Town02 description="straight cruise"
storyboard sb
init ini parent=sb
entity ego kind=ego
init_action init=ini action=default_environment_action
action tele kind=teleport_world entity=ego x=10.0 y=-4.0 z=0.0 heading=0.0
init_action init=ini action=tele
dynamics cruise shape=linear dimension=time value=3.0
action go kind=speed entity=ego target=8.0 dynamics=cruise
init_action init=ini action=go
story st parent=sb
act a parent=st
trigger t kind=start attach=a conditions=sim_start_condition
maneuver_group mg parent=a
actor group=mg entity=ego
maneuver man parent=mg
event ev parent=man
dynamics stop_dyn shape=linear dimension=time value=2.0
action halt kind=speed entity=ego target=0.0 dynamics=stop_dyn
attach_action event=ev action=halt
condition at4 kind=simulation_time value=4.0
trigger evt kind=start attach=ev conditions=at4
)";
  Ontology parsed = parse_scenario_text(text);

  ScenarioBuilder b(build_master(), "Town02");
  b.set_description("straight cruise");
  std::string sb = b.structural_element(Structural::Storyboard, b.root());
  std::string init = b.structural_element(Structural::Init, sb);
  std::string ego = b.new_entity(EntityKind::EgoVehicle);
  b.add_init_action(init, b.default_environment_action());
  b.add_init_action(init, b.new_action(TeleportToWorld{ego, 10.0, -4.0, 0.0, 0.0}));
  b.add_init_action(init, b.new_action(ChangeSpeed{
                              ego, 8.0, b.new_transition_dynamics("linear", "time", 3.0)}));
  std::string story = b.structural_element(Structural::Story, sb);
  std::string act = b.structural_element(Structural::Act, story);
  b.new_trigger(TriggerKind::Start, {"sim_start_condition"}, act);
  std::string mg = b.structural_element(Structural::ManeuverGroup, act);
  b.add_actor(mg, ego);
  std::string man = b.structural_element(Structural::Maneuver, mg);
  std::string ev = b.structural_element(Structural::Event, man);
  b.attach_action(ev, b.new_action(ChangeSpeed{
                          ego, 0.0, b.new_transition_dynamics("linear", "time", 2.0)}));
  b.new_trigger(TriggerKind::Start, {b.new_condition(SimulationTime{4.0})}, ev);

  CHECK(parsed.serialize() == b.finalize().serialize());
}

TEST_CASE("all statement kinds are exercised by the variety description") {
  const char* text = R"(
scenario town=Town01 description="kitchen sink"
storyboard sb
init ini parent=sb
entity ego kind=ego
entity bike kind=bicycle asset=vehicle.bh.crossbike
entity walker kind=pedestrian asset="walker.pedestrian.0001"
entity box kind=misc asset=static.prop.vendingmachine
entity car kind=car asset=vehicle.audi.tt
init_action init=ini action=default_environment_action
action tele kind=teleport_world entity=ego x=1.0 y=2.0 z=0.0 heading=0.0
init_action init=ini action=tele
action near kind=teleport_relative entity=bike reference=ego dx=20.0 dy=3.5 dz=0.0
init_action init=ini action=near
story st parent=sb
act a parent=st
trigger t kind=start attach=a conditions=sim_start_condition
maneuver_group mg parent=a
actor group=mg entity=bike
maneuver man parent=mg
event ev parent=man
dynamics swerve shape=sinusoidal dimension=time value=3.0
action cut kind=lane_change entity=bike reference=ego offset=-1 dynamics=swerve
attach_action event=ev action=cut
condition close kind=relative_distance entity=bike reference=ego value=15.0 rule=lessThan freespace=false delay=0.5 edge=falling
condition late kind=simulation_time value=2.0 rule=greaterThan
trigger evt kind=start attach=ev conditions=close,late
condition done kind=element_state element=ev state=completeState
trigger sbstop kind=stop attach=sb conditions=done
corner_case layer=content level=scene description="mixed traffic"
)";
  Ontology parsed = parse_scenario_text(text);
  CHECK(parsed.individuals_of("Entity").size() == 5);
  CHECK(parsed.individuals_of("RelativeLaneChangeAction").size() == 1);
  CHECK(parsed.individuals_of("SceneLevel").size() == 1);
  // two conditions joined on one trigger
  std::string ev_trigger;
  for (const auto& t : parsed.individuals_of("StartTrigger")) {
    if (parsed.objects_of(t, "has_condition").size() == 2) ev_trigger = t;
  }
  CHECK(!ev_trigger.empty());
}

TEST_CASE("parse errors carry file, line, and column") {
  auto fails = [](const char* text, ErrorCode code, const char* where) {
    std::string msg = error_message([&] { parse_scenario_text(text, "probe.scn"); });
    CAPTURE(msg);
    CAPTURE(where);
    CHECK(msg.find(where) != std::string::npos);
    try {
      parse_scenario_text(text, "probe.scn");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  // unknown statement keyword
  fails("scenario town=Town01\ngizmo x=1\n", ErrorCode::SyntaxError, "probe.scn:2:1");
  // the first statement must open the scenario
  fails("storyboard sb\n", ErrorCode::SyntaxError, "probe.scn:1:1");
  // only one scenario statement is allowed
  fails("scenario town=Town01\nscenario town=Town02\n", ErrorCode::SyntaxError, "probe.scn:2:1");
  // missing required key
  fails("scenario description=\"no town\"\n", ErrorCode::SyntaxError, "probe.scn:1:1");
  // unknown key
  fails("scenario town=Town01 color=red\n", ErrorCode::SyntaxError, "color");
  // malformed number (column of the key=value token)
  fails("scenario town=Town01\nstoryboard sb\ninit ini parent=sb\nentity ego kind=ego\n"
        "action t kind=teleport_world entity=ego x=wide y=0.0 z=0.0 heading=0.0\n",
        ErrorCode::SyntaxError, "probe.scn:5:41");
  // duplicate alias (two stories are legal; reusing the name is not)
  fails("scenario town=Town01\nstoryboard sb\nstory st parent=sb\nstory st parent=sb\n",
        ErrorCode::SyntaxError, "probe.scn:4:7");
  // a second storyboard is a builder error, reported with the statement position
  fails("scenario town=Town01\nstoryboard sb\nstoryboard sb2\n", ErrorCode::DuplicateName,
        "probe.scn:3:1");
  // duplicate key in one statement
  fails("scenario town=Town01 town=Town02\n", ErrorCode::SyntaxError, "town");
  // unterminated string
  fails("scenario town=Town01 description=\"open\n", ErrorCode::SyntaxError, "probe.scn:1:22");
  // reference to an alias that was never defined
  fails("scenario town=Town01\nstoryboard sb\ninit ini parent=ghost\n", ErrorCode::UnknownName,
        "probe.scn:3:1");
  // builder errors inherit the statement position
  fails("scenario town=Town01\nstoryboard sb\nentity ego kind=ego\nentity ego2 kind=ego\n",
        ErrorCode::DuplicateEgo, "probe.scn:4:1");
  // empty input
  fails("# nothing here\n", ErrorCode::SyntaxError, "probe.scn");
}

TEST_CASE("an incomplete description fails finalize validation") {
  // storyboard without stories: rule 1
  const char* text = R"(
scenario town=Town01
storyboard sb
init ini parent=sb
entity ego kind=ego
init_action init=ini action=default_environment_action
)";
  CHECK_THROWS_AS(parse_scenario_text(text), ValidationError);
}

TEST_CASE("quoted strings support escapes and spaces") {
  const char* text = R"(
scenario town=Town01 description="two  spaces \\ one backslash"
storyboard sb
init ini parent=sb
entity ego kind=ego
init_action init=ini action=default_environment_action
story st parent=sb
act a parent=st
trigger t kind=start attach=a conditions=sim_start_condition
maneuver_group mg parent=a
actor group=mg entity=ego
maneuver man parent=mg
event ev parent=man
dynamics d shape=linear dimension=time value=1.0
action halt kind=speed entity=ego target=0.0 dynamics=d
attach_action event=ev action=halt
condition c kind=simulation_time value=1.0
trigger et kind=start attach=ev conditions=c
)";
  Ontology parsed = parse_scenario_text(text);
  std::string root = parsed.individuals_of("Scenario").front();
  CHECK(parsed.literal_of(root, "description").value().lexical ==
        "two  spaces \\ one backslash");

  // ontology string literals cannot carry quotes; the rejection is positioned
  std::string msg = error_message([] {
    parse_scenario_text("scenario town=Town01 description=\"say \\\"hi\\\"\"\n", "probe.scn");
  });
  CHECK(msg.find("probe.scn:1:1") != std::string::npos);
  CHECK(msg.find("BadLiteral") != std::string::npos);
}
