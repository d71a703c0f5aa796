#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ontoscen/builder.hpp"
#include "ontoscen/catalog.hpp"
#include "ontoscen/cli.hpp"
#include "ontoscen/fusion.hpp"
#include "ontoscen/ontology.hpp"
#include "ontoscen/scenario_text.hpp"
#include "ontoscen/sensor_effects.hpp"
#include "ontoscen/xml.hpp"
#include "ontoscen/xosc.hpp"
#include "test_support.hpp"

using namespace ontoscen;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Fresh per-test scratch directory under the system temp dir.
fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("ontoscen_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// A complete scenario exercising one init action, one event and a stop
// trigger; every well-formedness rule is satisfied.
const char* kSmokeScn =
    "scenario town=Town03 description=\"cli smoke scenario\"\n"
    "storyboard sb\n"
    "init ini parent=sb\n"
    "entity ego kind=ego\n"
    "init_action init=ini action=default_environment_action\n"
    "action tele kind=teleport_world entity=ego x=10.0 y=-4.0 z=0.0 heading=0.0\n"
    "init_action init=ini action=tele\n"
    "story st parent=sb\n"
    "act a1 parent=st\n"
    "trigger act_start kind=start attach=a1 conditions=sim_start_condition\n"
    "maneuver_group mg parent=a1\n"
    "actor group=mg entity=ego\n"
    "maneuver man parent=mg\n"
    "event ev parent=man\n"
    "dynamics dyn shape=linear dimension=time value=3.0\n"
    "action accel kind=speed entity=ego target=8.0 dynamics=dyn\n"
    "attach_action event=ev action=accel\n"
    "condition t2 kind=simulation_time value=2.0\n"
    "trigger ev_start kind=start attach=ev conditions=t2\n";

// Stops at an act with neither maneuver groups nor... anything: rule 3.
const char* kBareActScn =
    "scenario town=Town01\n"
    "storyboard sb\n"
    "init ini parent=sb\n"
    "entity ego kind=ego\n"
    "init_action init=ini action=default_environment_action\n"
    "story st parent=sb\n"
    "act a1 parent=st\n"
    "trigger t kind=start attach=a1 conditions=sim_start_condition\n";

const char* kFixedDate = "2022-06-15T12:00:00";

struct EnvGuard {
  explicit EnvGuard(const std::string& value) { setenv("ONTOSCEN_ASSETS", value.c_str(), 1); }
  ~EnvGuard() { unsetenv("ONTOSCEN_ASSETS"); }
};

}  // namespace

TEST_CASE("usage errors exit 64") {
  CliResult r = run({});
  CHECK(r.code == 64);
  CHECK(contains(r.err, "usage:"));

  CHECK(run({"frobnicate"}).code == 64);
  CHECK(contains(run({"frobnicate"}).err, "frobnicate"));
  CHECK(run({"build"}).code == 64);
  CHECK(run({"build", "x.scn"}).code == 64);                       // missing -o
  CHECK(run({"build", "x.scn", "-o"}).code == 64);                 // -o needs a value
  CHECK(run({"build", "x.scn", "-o", "y.onto", "--frob"}).code == 64);
  CHECK(contains(run({"build", "x.scn", "-o", "y", "--frob"}).err, "--frob"));
  CHECK(run({"convert", "a.onto", "-o", "b.xosc", "--date"}).code == 64);
  CHECK(run({"merge", "one.onto", "-o", "out.onto"}).code == 64);  // needs two inputs
  CHECK(run({"validate"}).code == 64);
  CHECK(run({"validate", "a.onto", "b.onto"}).code == 64);         // one file only
  CHECK(run({"stats", "x.onto", "--format", "yaml"}).code == 64);
  CHECK(run({"catalog"}).code == 64);
  CHECK(run({"catalog", "frob"}).code == 64);
  CHECK(run({"catalog", "list", "extra"}).code == 64);
  CHECK(run({"catalog", "build", "b"}).code == 64);                // missing -o
  CHECK(run({"effects"}).code == 64);
  CHECK(run({"effects", "blur", "a.ppm", "-o", "b.ppm"}).code == 64);
  CHECK(run({"effects", "deadpixels", "a.ppm", "-o", "b.ppm"}).code == 64);  // missing --mask
  CHECK(run({"effects", "overexposure", "a.ppm", "-o", "b.ppm"}).code == 64);  // missing --gain
  CHECK(run({"effects", "overexposure", "a.ppm", "-o", "b.ppm", "--gain", "abc"}).code == 64);

  // help goes to stdout and succeeds
  CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "usage:"));
  CHECK(contains(help.out, "catalog build"));
  CHECK(run({"help"}).code == 0);
}

TEST_CASE("build compiles a scenario file") {
  fs::path dir = scratch("build");
  fs::path in = dir / "smoke.scn";
  fs::path out = dir / "smoke.onto";
  write_file(in, kSmokeScn);
  std::string input_bytes = read_file(in);

  CliResult r = run({"build", in.string(), "-o", out.string()});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(contains(r.out, "wrote " + out.string()));
  REQUIRE(fs::exists(out));

  // byte-for-byte what the library produces for the same source
  Ontology expected = parse_scenario_text(kSmokeScn, in.string());
  CHECK(read_file(out) == expected.serialize());
  CHECK(validate_scenario(expected).empty());

  // the input is never touched
  CHECK(read_file(in) == input_bytes);
}

TEST_CASE("build failures map onto exit codes") {
  fs::path dir = scratch("build_fail");

  // validation failure: rule listing on the diagnostic stream, exit 2
  fs::path bare = dir / "bare.scn";
  write_file(bare, kBareActScn);
  CliResult r = run({"build", bare.string(), "-o", (dir / "bare.onto").string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "act-shape"));
  CHECK(contains(r.err, "rule 3"));
  CHECK(!fs::exists(dir / "bare.onto"));

  // parse failure: positioned message, exit 1
  fs::path bad = dir / "bad.scn";
  write_file(bad, "flavor town=Town01\n");
  r = run({"build", bad.string(), "-o", (dir / "bad.onto").string()});
  CHECK(r.code == 1);
  CHECK(contains(r.err, bad.string() + ":1:1"));

  // unreadable input: exit 1
  r = run({"build", (dir / "missing.scn").string(), "-o", (dir / "x.onto").string()});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "missing.scn"));
}

TEST_CASE("convert emits openscenario xml") {
  fs::path dir = scratch("convert");
  fs::path in = dir / "b.onto";
  Ontology b = build_catalog_scenario("b");
  b.save(in.string());
  std::string input_bytes = read_file(in);

  fs::path out = dir / "b.xosc";
  CliResult r = run({"convert", in.string(), "-o", out.string(), "--date", kFixedDate});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "wrote " + out.string()));
  CHECK(read_file(out) == emit_xml(lower(b), kFixedDate));

  // fixed date makes repeated runs byte-identical
  fs::path out2 = dir / "b2.xosc";
  CHECK(run({"convert", in.string(), "-o", out2.string(), "--date", kFixedDate}).code == 0);
  CHECK(read_file(out2) == read_file(out));

  // without --date the header is stamped with the current time
  fs::path out3 = dir / "b3.xosc";
  CHECK(run({"convert", in.string(), "-o", out3.string()}).code == 0);
  std::string stamped = read_file(out3);
  CHECK(contains(stamped, "date=\"2"));
  CHECK(validate_xosc({parse_xml(stamped)}).empty());
  CHECK(read_file(in) == input_bytes);

  // converting an invalid scenario lists the broken rule
  Ontology broken = b;
  std::string storyboard = b.objects_of("indiv_Scenario1", "has_storyboard").front();
  std::string init = b.objects_of(storyboard, "has_init").front();
  broken = broken.with_assertion_removed(storyboard, "has_init", init);
  fs::path bad = dir / "broken.onto";
  broken.save(bad.string());
  r = run({"convert", bad.string(), "-o", (dir / "broken.xosc").string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "storyboard-shape"));

  // garbage input is a parse error
  fs::path garbage = dir / "garbage.onto";
  write_file(garbage, "not an ontology\n");
  CHECK(run({"convert", garbage.string(), "-o", (dir / "g.xosc").string()}).code == 1);
}

TEST_CASE("merge fuses scenario files") {
  fs::path dir = scratch("merge");
  fs::path fin = dir / "f.onto";
  fs::path hin = dir / "h.onto";
  Ontology f = build_catalog_scenario("f");
  Ontology h = build_catalog_scenario("h");
  f.save(fin.string());
  h.save(hin.string());

  fs::path out = dir / "merged.onto";
  CliResult r = run({"merge", fin.string(), hin.string(), "-o", out.string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "wrote " + out.string()));

  Ontology merged = Ontology::load(out.string());
  CHECK(merged.stats().individuals == 122);
  CHECK(validate_scenario(merged).empty());
  CHECK(merged.serialize() == fuse({f, h}).ontology.serialize());

  // inputs stay untouched
  CHECK(read_file(fin) == f.serialize());
  CHECK(read_file(hin) == h.serialize());

  fs::path garbage = dir / "garbage.onto";
  write_file(garbage, "nonsense\n");
  CHECK(run({"merge", fin.string(), garbage.string(), "-o", (dir / "x.onto").string()}).code == 1);
}

TEST_CASE("validate checks ontology and xosc files") {
  fs::path dir = scratch("validate");
  fs::path onto = dir / "b.onto";
  Ontology b = build_catalog_scenario("b");
  b.save(onto.string());

  CliResult r = run({"validate", onto.string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "valid"));

  // a missing init violates rule 1; the rule is named on the error stream
  std::string storyboard = b.objects_of("indiv_Scenario1", "has_storyboard").front();
  std::string init = b.objects_of(storyboard, "has_init").front();
  Ontology broken = b.with_assertion_removed(storyboard, "has_init", init);
  fs::path badonto = dir / "broken.onto";
  broken.save(badonto.string());
  r = run({"validate", badonto.string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "storyboard-shape"));
  CHECK(contains(r.err, "rule 1"));

  // xosc round trip
  fs::path xosc = dir / "b.xosc";
  write_file(xosc, emit_xml(lower(b), kFixedDate));
  r = run({"validate", xosc.string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "valid"));

  // strip a required attribute from the header
  std::string tampered = read_file(xosc);
  std::size_t at = tampered.find("author=\"ontoscen\" ");
  REQUIRE(at != std::string::npos);
  tampered.erase(at, std::string("author=\"ontoscen\" ").size());
  fs::path badxosc = dir / "tampered.xosc";
  write_file(badxosc, tampered);
  r = run({"validate", badxosc.string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "author"));

  // malformed xml is a parse error
  fs::path truncated = dir / "truncated.xosc";
  write_file(truncated, read_file(xosc).substr(0, 200));
  CHECK(run({"validate", truncated.string()}).code == 1);

  // only the two known extensions are accepted
  fs::path txt = dir / "file.txt";
  write_file(txt, "hello\n");
  CHECK(run({"validate", txt.string()}).code == 64);
}

TEST_CASE("stats reports ontology statistics") {
  fs::path dir = scratch("stats");
  fs::path onto = dir / "b.onto";
  Ontology b = build_catalog_scenario("b");
  b.save(onto.string());
  OntologyStats s = b.stats();
  REQUIRE(s.individuals == 94);

  CliResult text = run({"stats", onto.string()});
  CHECK(text.code == 0);
  CHECK(contains(text.out, "individuals"));
  CHECK(contains(text.out, "94"));
  CHECK(run({"stats", onto.string(), "--format", "text"}).out == text.out);

  CliResult machine = run({"stats", onto.string(), "--format", "machine-readable"});
  CHECK(machine.code == 0);
  std::string expected = "STATS/1\n";
  expected += "classes " + std::to_string(s.classes) + "\n";
  expected += "object_properties " + std::to_string(s.object_properties) + "\n";
  expected += "data_properties " + std::to_string(s.data_properties) + "\n";
  expected += "individuals 94\n";
  expected += "assertions " + std::to_string(s.assertions) + "\n";
  expected += "axioms " + std::to_string(s.axioms) + "\n";
  CHECK(machine.out == expected);

  fs::path garbage = dir / "garbage.onto";
  write_file(garbage, "nonsense\n");
  CHECK(run({"stats", garbage.string()}).code == 1);
}

TEST_CASE("catalog list prints every entry") {
  CliResult r = run({"catalog", "list"});
  CHECK(r.code == 0);
  std::vector<std::string> rows = lines_of(r.out);
  REQUIRE(rows.size() == catalog_entries().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CatalogEntry& entry = catalog_entries()[i];
    CHECK(rows[i].rfind(entry.id + "  ", 0) == 0);
    CHECK(contains(rows[i], entry.title));
  }
  CHECK(contains(r.out, "sensor/hardware"));
  CHECK(contains(r.out, "effects"));
  CHECK(contains(r.out, "content/domain"));
  CHECK(contains(r.out, "fused d+f"));
  CHECK(contains(r.out, "fused f+h"));
}

TEST_CASE("catalog build writes entry files") {
  fs::path dir = scratch("catalog_build");

  fs::path bdir = dir / "b";
  CliResult r = run({"catalog", "build", "b", "-o", bdir.string(), "--date", kFixedDate});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(bdir / "b.onto"));
  REQUIRE(fs::exists(bdir / "b.xosc"));
  Ontology b = build_catalog_scenario("b");
  CHECK(read_file(bdir / "b.onto") == b.serialize());
  CHECK(read_file(bdir / "b.xosc") == emit_xml(lower(b), kFixedDate));
  CHECK(contains(r.out, "b.onto"));
  CHECK(contains(r.out, "b.xosc"));

  // the effects entry ships a base recording plus post-processing directives
  fs::path adir = dir / "a";
  r = run({"catalog", "build", "a", "-o", adir.string(), "--date", kFixedDate});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(adir / "a_base.onto"));
  REQUIRE(fs::exists(adir / "a_base.xosc"));
  REQUIRE(fs::exists(adir / "a_effects.txt"));
  REQUIRE(fs::exists(adir / "a_deadpixels.mask"));
  CHECK(read_file(adir / "a_base.onto") == build_catalog_scenario("a").serialize());
  CHECK(read_file(adir / "a_effects.txt") == catalog_effects_directive("a"));
  CHECK(read_file(adir / "a_deadpixels.mask") == catalog_pixel_mask("a"));

  // "all" adds the statistics table
  fs::path alldir = dir / "all";
  r = run({"catalog", "build", "all", "-o", alldir.string(), "--date", kFixedDate});
  CHECK(r.code == 0);
  CHECK(read_file(alldir / "stats.txt") == catalog_stats());
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(alldir)) ++files;
  CHECK(files == 23);  // 9 entries x2, four files for entry a, stats.txt
  CHECK(read_file(alldir / "b.onto") == read_file(bdir / "b.onto"));
  CHECK(read_file(alldir / "b.xosc") == read_file(bdir / "b.xosc"));
  REQUIRE(fs::exists(alldir / "j.xosc"));

  r = run({"catalog", "build", "zz", "-o", (dir / "zz").string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "zz"));
}

TEST_CASE("effects applies image transforms") {
  fs::path dir = scratch("effects");
  Pixmap card;
  card.width = 4;
  card.height = 3;
  card.data.resize(36);
  for (std::size_t i = 0; i < card.data.size(); ++i) {
    card.data[i] = static_cast<std::uint8_t>((i * 7) % 256);
  }
  fs::path in = dir / "in.ppm";
  card.save(in.string());
  std::string input_bytes = read_file(in);

  fs::path mask = dir / "dead.mask";
  write_file(mask, "MASK/1\n4 3\n0 0\n3 2\n");

  fs::path out = dir / "dead.ppm";
  CliResult r = run({"effects", "deadpixels", in.string(), "-o", out.string(),
                     "--mask", mask.string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "wrote " + out.string()));
  Pixmap expected = card;
  PixelMask m = PixelMask::load(mask.string());
  apply_dead_pixels(expected, m);
  CHECK(read_file(out) == expected.serialize());
  CHECK(read_file(in) == input_bytes);

  fs::path bright = dir / "bright.ppm";
  r = run({"effects", "overexposure", in.string(), "-o", bright.string(), "--gain", "1.5"});
  CHECK(r.code == 0);
  Pixmap overexposed = card;
  apply_overexposure(overexposed, 1.5);
  CHECK(read_file(bright) == overexposed.serialize());

  // a gain that darkens is refused
  r = run({"effects", "overexposure", in.string(), "-o", bright.string(), "--gain", "1.0"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "gain"));

  // mask sized for another camera
  fs::path wrong = dir / "wrong.mask";
  write_file(wrong, "MASK/1\n8 6\n1 1\n");
  r = run({"effects", "deadpixels", in.string(), "-o", out.string(), "--mask", wrong.string()});
  CHECK(r.code == 2);

  // unreadable input
  CHECK(run({"effects", "deadpixels", (dir / "nope.ppm").string(), "-o", out.string(),
             "--mask", mask.string()}).code == 1);

  // flags are per-transform
  CHECK(run({"effects", "deadpixels", in.string(), "-o", out.string(), "--mask", mask.string(),
             "--gain", "2.0"}).code == 64);
}

TEST_CASE("asset manifest can be overridden from the environment") {
  fs::path dir = scratch("assets_env");
  std::string manifest =
      "ASSETS/1\n"
      "asset car vehicle.tesla.model3 4.69 2.09 1.44\n"
      "asset car vehicle.test.custom 9.77 2.00 1.50\n";
  fs::path manifest_path = dir / "custom_assets.txt";
  write_file(manifest_path, manifest);

  std::string scn = kSmokeScn;
  std::size_t at = scn.find("entity ego kind=ego\n");
  REQUIRE(at != std::string::npos);
  scn.insert(at + std::string("entity ego kind=ego\n").size(),
             "entity probe kind=car asset=vehicle.test.custom\n");
  fs::path in = dir / "custom.scn";
  write_file(in, scn);
  fs::path out = dir / "custom.onto";

  // the embedded manifest does not know the blueprint
  CliResult r = run({"build", in.string(), "-o", out.string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "vehicle.test.custom"));

  {
    EnvGuard env(manifest_path.string());
    CHECK(run({"build", in.string(), "-o", out.string()}).code == 0);

    // lowering reads the manifest for the custom blueprint's dimensions
    fs::path xosc = dir / "custom.xosc";
    CHECK(run({"convert", out.string(), "-o", xosc.string(), "--date", kFixedDate}).code == 0);
    CHECK(contains(read_file(xosc), "name=\"vehicle.test.custom\""));
    CHECK(contains(read_file(xosc), "length=\"9.77\""));

    // a dangling override path is an i/o error
    EnvGuard missing((dir / "nope.txt").string());
    CHECK(run({"validate", out.string()}).code == 0);  // validate needs no manifest
    CHECK(run({"convert", out.string(), "-o", xosc.string()}).code == 1);
  }

  // without the override the stored blueprint id cannot be lowered
  CHECK(run({"convert", out.string(), "-o", (dir / "x.xosc").string()}).code == 2);
}

TEST_CASE("xml parser round-trips emitted documents") {
  Ontology b = build_catalog_scenario("b");
  std::string doc = emit_xml(lower(b), kFixedDate);
  XmlNode root = parse_xml(doc);
  CHECK(root.name == "OpenSCENARIO");
  CHECK(emit_document(root) == doc);
  CHECK(validate_xosc({root}).empty());

  // escapes, comments, whitespace and self-closing elements
  XmlNode tiny = parse_xml(
      "<?xml version=\"1.0\"?>\n"
      "<!-- prologue -->\n"
      "<A x=\"a&amp;b&lt;c&gt;d&quot;e&apos;f\">\n"
      "  <B/> <!-- aside -->\n"
      "</A>\n");
  CHECK(tiny.name == "A");
  REQUIRE(tiny.find_attr("x") != nullptr);
  CHECK(*tiny.find_attr("x") == "a&b<c>d\"e'f");
  CHECK(tiny.children.size() == 1);
  CHECK(tiny.children.front().name == "B");

  CHECK_ERROR(parse_xml(""), SyntaxError);
  CHECK_ERROR(parse_xml("<A>"), SyntaxError);                   // unterminated
  CHECK_ERROR(parse_xml("<A></B>"), SyntaxError);               // tag mismatch
  CHECK_ERROR(parse_xml("<A x=\"1\" x=\"2\"/>"), SyntaxError);  // duplicate attribute
  CHECK_ERROR(parse_xml("<A>text</A>"), SyntaxError);           // no text content
  CHECK_ERROR(parse_xml("<A x=\"&bogus;\"/>"), SyntaxError);    // unknown entity
  CHECK_ERROR(parse_xml("<A x='1'/>"), SyntaxError);            // quoting style
  CHECK_ERROR(parse_xml("<A/><B/>"), SyntaxError);              // two roots
  CHECK_ERROR(parse_xml("<A/>junk"), SyntaxError);
  CHECK_ERROR(parse_xml(doc.substr(0, doc.size() / 2)), SyntaxError);
}

TEST_CASE("installed binary wires up the same front end") {
  fs::path dir = scratch("binary");
  fs::path outfile = dir / "list.txt";
  std::string cli = ONTOSCEN_CLI_PATH;
  REQUIRE(fs::exists(cli));

  int status = std::system((cli + " catalog list > " + outfile.string() + " 2>/dev/null").c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(lines_of(read_file(outfile)).size() == 10);

  status = std::system((cli + " >/dev/null 2>&1").c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 64);
}
