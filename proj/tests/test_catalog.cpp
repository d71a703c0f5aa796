#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ontoscen/builder.hpp"
#include "ontoscen/catalog.hpp"
#include "ontoscen/fusion.hpp"
#include "ontoscen/sensor_effects.hpp"
#include "ontoscen/xosc.hpp"
#include "test_support.hpp"

using namespace ontoscen;

namespace {

std::size_t scenario_count(const Ontology& o) {
  std::size_t n = 0;
  for (const auto& [name, def] : o.individuals()) {
    (void)name;
    if (def.origin == Origin::Scenario) ++n;
  }
  return n;
}

const std::vector<std::string> kIds = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};

}  // namespace

TEST_CASE("the catalog lists exactly ten entries in id order") {
  const auto& entries = catalog_entries();
  REQUIRE(entries.size() == 10);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(entries[i].id == kIds[i]);
    CHECK(!entries[i].title.empty());
    CHECK(!entries[i].summary.empty());
  }
  CHECK(catalog_entry("a").has_effects);
  CHECK(!catalog_entry("b").has_effects);
  CHECK(catalog_entry("i").fused_from == std::vector<std::string>{"d", "f"});
  CHECK(catalog_entry("j").fused_from == std::vector<std::string>{"f", "h"});
  CHECK_ERROR(catalog_entry("k"), UnknownName);
  CHECK_ERROR(build_catalog_scenario("z"), UnknownName);
}

TEST_CASE("entry counts match the published statistics table") {
  struct Row {
    const char* id;
    std::size_t total;
    std::size_t fresh;
  };
  const Row rows[] = {
      {"b", 94, 27},  {"c", 93, 26},  {"d", 164, 97}, {"e", 111, 44},  {"f", 94, 27},
      {"g", 104, 37}, {"h", 98, 31},  {"i", 188, 121}, {"j", 122, 55},
  };
  for (const Row& row : rows) {
    CAPTURE(row.id);
    Ontology o = build_catalog_scenario(row.id);
    CHECK(o.stats().individuals == row.total);
    CHECK(scenario_count(o) == row.fresh);
  }
}

TEST_CASE("every entry validates, lowers, and emits schema-clean documents") {
  for (const std::string& id : kIds) {
    CAPTURE(id);
    Ontology o = build_catalog_scenario(id);
    CHECK(validate_scenario(o).empty());
    // the canonical text round-trips byte-identically
    std::string text = o.serialize();
    Ontology back = Ontology::parse(text);
    CHECK(back.serialize() == text);
    // lowering succeeds and the document passes the structural checker
    XoscDocument doc = lower(o);
    CHECK(validate_xosc(doc).empty());
    // every entry is set in Town01
    std::string root = o.individuals_of("Scenario").front();
    CHECK(o.object_of(root, "has_town") == std::optional<std::string>("Town01"));
  }
}

TEST_CASE("rebuilding an entry is deterministic") {
  for (const std::string& id : kIds) {
    CAPTURE(id);
    CHECK(build_catalog_scenario(id).serialize() == build_catalog_scenario(id).serialize());
  }
}

TEST_CASE("entries carry the corner-case tags of the statistics table") {
  auto tags = [](const Ontology& o, const char* cls) { return o.individuals_of(cls).size(); };

  Ontology a = build_catalog_scenario("a");
  CHECK(tags(a, "CornerCase") == 0);

  CHECK(tags(build_catalog_scenario("b"), "DomainLevel") == 1);
  CHECK(tags(build_catalog_scenario("c"), "ObjectLevel") == 1);
  CHECK(tags(build_catalog_scenario("d"), "SceneLevel") == 1);
  CHECK(tags(build_catalog_scenario("e"), "SceneLevel") == 1);
  CHECK(tags(build_catalog_scenario("f"), "ScenarioLevel") == 1);
  CHECK(tags(build_catalog_scenario("g"), "ScenarioLevel") == 1);
  CHECK(tags(build_catalog_scenario("h"), "ScenarioLevel") == 1);

  Ontology i = build_catalog_scenario("i");
  CHECK(tags(i, "SceneLevel") == 1);
  CHECK(tags(i, "ScenarioLevel") == 1);
  Ontology j = build_catalog_scenario("j");
  CHECK(tags(j, "ScenarioLevel") == 2);
}

TEST_CASE("fused entries equal fusing their source entries") {
  FusionResult i = fuse({build_catalog_scenario("d"), build_catalog_scenario("f")});
  CHECK(build_catalog_scenario("i").serialize() == i.ontology.serialize());
  CHECK(i.report.dropped.empty());
  CHECK(i.report.defaults_deduplicated == 67);
  CHECK(i.report.stories_merged == 2);

  FusionResult j = fuse({build_catalog_scenario("f"), build_catalog_scenario("h")});
  CHECK(build_catalog_scenario("j").serialize() == j.ontology.serialize());
  CHECK(j.report.dropped.empty());
  CHECK(j.report.defaults_deduplicated == 67);
  CHECK(j.report.stories_merged == 2);

  // the shared ego template means both inputs' init actions are all carried:
  // 1 shared environment default + 2 x ego (teleport + speed) + the
  // cyclist's (teleport + speed) + the pedestrian's teleport
  CHECK(j.report.init_actions_merged == 8);

  // union of entities: the shared ego plus each input's own road user
  std::vector<std::string> entities =
      j.ontology.objects_of(j.report.output_root, "has_entity");
  std::sort(entities.begin(), entities.end());
  CHECK(entities == std::vector<std::string>{"ego_vehicle", "indiv_Bicycle1", "indiv_Pedestrian1"});
}

TEST_CASE("entry (b) reproduces the fog-bank chain") {
  Ontology b = build_catalog_scenario("b");

  // Scenario -> Storyboard -> Story -> Act -> ManeuverGroup -> Maneuver -> Event
  std::string root = b.individuals_of("Scenario").front();
  std::string sb = b.object_of(root, "has_storyboard").value();
  std::string story = b.objects_of(sb, "has_story").front();
  std::string act = b.objects_of(story, "has_act").front();
  std::string mg = b.objects_of(act, "has_maneuver_group").front();
  std::string man = b.objects_of(mg, "has_maneuver").front();
  std::string event = b.objects_of(man, "has_event").front();

  // the event swaps in a fresh environment with a 10 m fog bank
  std::string wrapper = b.objects_of(event, "has_action").front();
  std::string action = b.object_of(wrapper, "has_concrete_action").value();
  CHECK(b.individual_is_a(action, "EnvironmentAction"));
  std::string env = b.object_of(action, "has_environment").value();
  std::string weather = b.object_of(env, "has_weather").value();
  std::string fog = b.object_of(weather, "has_fog").value();
  CHECK(b.literal_of(fog, "visual_range").value().lexical == "10");

  // started by a distance condition bound to the ego vehicle
  REQUIRE(b.has_individual("indiv_DistanceStartTrigger"));
  std::string trigger = b.objects_of(event, "has_start_trigger").front();
  CHECK(trigger == "indiv_DistanceStartTrigger");
  std::string cond = b.objects_of(trigger, "has_condition").front();
  CHECK(b.individual_is_a(cond, "TraveledDistanceCondition"));
  CHECK(b.objects_of(cond, "has_triggering_entity") ==
        std::vector<std::string>{"ego_vehicle"});
  CHECK(b.literal_of(cond, "condition_value").value().lexical == "50");
}

TEST_CASE("entry (a) pairs a plain drive with a camera directive") {
  std::string directive = catalog_effects_directive("a");
  CHECK(directive.substr(0, 10) == "EFFECTS/1\n");
  CHECK(directive.find("dead_pixels a_deadpixels.mask\n") != std::string::npos);

  PixelMask mask = PixelMask::parse(catalog_pixel_mask("a"));
  // matches the master camera resolution
  CHECK(mask.width == 800);
  CHECK(mask.height == 600);
  CHECK(!mask.pixels.empty());

  CHECK_ERROR(catalog_effects_directive("b"), UnknownName);
  CHECK_ERROR(catalog_pixel_mask("b"), UnknownName);
}

TEST_CASE("the statistics table is stable") {
  CHECK(catalog_stats() ==
        "CATALOG-STATS/1\n"
        "a - -\n"
        "b 94 27\n"
        "c 93 26\n"
        "d 164 97\n"
        "e 111 44\n"
        "f 94 27\n"
        "g 104 37\n"
        "h 98 31\n"
        "i 188 121\n"
        "j 122 55\n");
}

TEST_CASE("fresh builds match the published golden files") {
  namespace fs = std::filesystem;
  const fs::path goldens = fs::path(ONTOSCEN_SOURCE_DIR) / "goldens";
  REQUIRE(fs::exists(goldens));
  const std::string date = "2022-06-15T12:00:00";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  for (const CatalogEntry& entry : catalog_entries()) {
    CAPTURE(entry.id);
    Ontology o = build_catalog_scenario(entry.id);
    std::string stem = entry.has_effects ? entry.id + "_base" : entry.id;
    CHECK(slurp(goldens / (stem + ".onto")) == o.serialize());
    CHECK(slurp(goldens / (stem + ".xosc")) == emit_xml(lower(o), date));
    if (entry.has_effects) {
      CHECK(slurp(goldens / (entry.id + "_effects.txt")) == catalog_effects_directive(entry.id));
      CHECK(slurp(goldens / (entry.id + "_deadpixels.mask")) == catalog_pixel_mask(entry.id));
    }
  }
  CHECK(slurp(goldens / "stats.txt") == catalog_stats());
}
