#include "ontoscen/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "ontoscen/builder.hpp"
#include "ontoscen/catalog.hpp"
#include "ontoscen/errors.hpp"
#include "ontoscen/fusion.hpp"
#include "ontoscen/master.hpp"
#include "ontoscen/ontology.hpp"
#include "ontoscen/scenario_text.hpp"
#include "ontoscen/sensor_effects.hpp"
#include "ontoscen/xml.hpp"
#include "ontoscen/xosc.hpp"

namespace ontoscen {
namespace {

const char* kUsage =
    "usage: ontoscen <command> [arguments]\n"
    "\n"
    "commands:\n"
    "  build <scenario.scn> -o <out.onto>      compile a scenario description\n"
    "  convert <in.onto> -o <out.xosc> [--date <iso8601>]\n"
    "                                          lower a scenario to OpenSCENARIO 1.0\n"
    "  merge <in.onto> <in.onto> [...] -o <out.onto>\n"
    "                                          fuse two or more scenarios\n"
    "  validate <in.onto | in.xosc>            check well-formedness\n"
    "  stats <in.onto> [--format text|machine-readable]\n"
    "                                          print ontology statistics\n"
    "  catalog list                            list the corner case catalog\n"
    "  catalog build <id|all> -o <dir> [--date <iso8601>]\n"
    "                                          write catalog entry files\n"
    "  effects deadpixels <in.ppm> -o <out.ppm> --mask <file>\n"
    "  effects overexposure <in.ppm> -o <out.ppm> --gain <factor>\n"
    "\n"
    "exit codes: 0 success, 1 i/o or parse failure, 2 validation or semantic\n"
    "failure, 64 usage errors.\n"
    "\n"
    "ONTOSCEN_ASSETS names an alternative asset manifest for build and convert;\n"
    "catalog entries always use the embedded manifest.\n";

// Ends the run with exit code 64; never leaves run_cli.
struct UsageError {
  std::string message;
};

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;

  const std::string* flag(const std::string& name) const {
    auto it = flags.find(name);
    return it == flags.end() ? nullptr : &it->second;
  }

  const std::string& required_flag(const std::string& name) const {
    const std::string* value = flag(name);
    if (!value) throw UsageError{"missing required flag '" + name + "'"};
    return *value;
  }
};

// Splits args[start..] into positionals and valued --flags. Every allowed
// flag takes exactly one value.
Args parse_args(const std::vector<std::string>& args, std::size_t start,
                std::initializer_list<const char*> allowed) {
  Args out;
  for (std::size_t i = start; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.size() >= 2 && arg[0] == '-' && !std::isdigit(static_cast<unsigned char>(arg[1]))) {
      bool known = std::any_of(allowed.begin(), allowed.end(),
                               [&](const char* f) { return arg == f; });
      if (!known) throw UsageError{"unknown flag '" + arg + "'"};
      if (out.flags.count(arg)) throw UsageError{"flag '" + arg + "' given twice"};
      if (i + 1 >= args.size()) throw UsageError{"flag '" + arg + "' needs a value"};
      out.flags[arg] = args[++i];
    } else {
      out.positional.push_back(arg);
    }
  }
  return out;
}

void need_positionals(const Args& args, std::size_t n, const char* what) {
  if (args.positional.size() < n) throw UsageError{std::string("missing ") + what};
  if (args.positional.size() > n) {
    throw UsageError{"unexpected argument '" + args.positional[n] + "'"};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure on '" + path + "'");
  return buf.str();
}

void write_file(std::ostream& log, const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out.good()) throw Error(ErrorCode::IoError, "write failure on '" + path + "'");
  log << "wrote " << path << "\n";
}

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// The manifest build and convert run against: ONTOSCEN_ASSETS when set,
// otherwise the embedded one.
AssetManifest active_manifest() {
  if (const char* path = std::getenv("ONTOSCEN_ASSETS")) return AssetManifest::load(path);
  return AssetManifest::embedded();
}

void print_violations(std::ostream& err, const std::vector<RuleViolation>& violations) {
  err << "validation failed: " << violations.size()
      << (violations.size() == 1 ? " violation\n" : " violations\n");
  for (const RuleViolation& v : violations) {
    err << "  rule " << v.rule << " (" << v.rule_id << "): " << v.individual << ": " << v.detail
        << "\n";
  }
}

int cmd_build(const std::vector<std::string>& args, std::ostream& out) {
  Args a = parse_args(args, 1, {"-o"});
  need_positionals(a, 1, "scenario file");
  const std::string& out_path = a.required_flag("-o");
  Ontology scenario = load_scenario_text(a.positional[0], active_manifest());
  write_file(out, out_path, scenario.serialize());
  return 0;
}

int cmd_convert(const std::vector<std::string>& args, std::ostream& out) {
  Args a = parse_args(args, 1, {"-o", "--date"});
  need_positionals(a, 1, "input ontology");
  const std::string& out_path = a.required_flag("-o");
  Ontology scenario = Ontology::load(a.positional[0]);
  std::optional<std::string> date;
  if (const std::string* value = a.flag("--date")) date = *value;
  write_file(out, out_path, emit_xml(lower(scenario, active_manifest()), date));
  return 0;
}

int cmd_merge(const std::vector<std::string>& args, std::ostream& out) {
  Args a = parse_args(args, 1, {"-o"});
  if (a.positional.size() < 2) throw UsageError{"merge needs at least two input files"};
  const std::string& out_path = a.required_flag("-o");
  std::vector<Ontology> inputs;
  inputs.reserve(a.positional.size());
  for (const std::string& path : a.positional) inputs.push_back(Ontology::load(path));
  FusionResult fused = fuse(inputs);
  write_file(out, out_path, fused.ontology.serialize());
  const FusionReport& r = fused.report;
  out << "merged " << r.inputs.size() << " scenarios: " << r.individuals_merged
      << " individuals, " << r.stories_merged << " stories, " << r.entities_merged
      << " entities, " << r.init_actions_merged << " init actions";
  if (!r.dropped.empty()) out << ", " << r.dropped.size() << " init actions dropped";
  out << "\n";
  return 0;
}

int cmd_validate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Args a = parse_args(args, 1, {});
  need_positionals(a, 1, "input file");
  const std::string& path = a.positional[0];
  if (ends_with(path, ".onto")) {
    std::vector<RuleViolation> violations = validate_scenario(Ontology::load(path));
    if (!violations.empty()) {
      print_violations(err, violations);
      return 2;
    }
  } else if (ends_with(path, ".xosc")) {
    XoscDocument doc{parse_xml(read_file(path))};
    std::vector<XoscViolation> violations = validate_xosc(doc);
    if (!violations.empty()) {
      err << "document check failed: " << violations.size()
          << (violations.size() == 1 ? " problem\n" : " problems\n");
      for (const XoscViolation& v : violations) err << "  " << v.path << ": " << v.rule << "\n";
      return 2;
    }
  } else {
    throw UsageError{"expected a .onto or .xosc file, got '" + path + "'"};
  }
  out << "valid: " << path << "\n";
  return 0;
}

int cmd_stats(const std::vector<std::string>& args, std::ostream& out) {
  Args a = parse_args(args, 1, {"--format"});
  need_positionals(a, 1, "input ontology");
  std::string format = "text";
  if (const std::string* value = a.flag("--format")) format = *value;
  if (format != "text" && format != "machine-readable") {
    throw UsageError{"unknown stats format '" + format + "'"};
  }
  OntologyStats s = Ontology::load(a.positional[0]).stats();
  if (format == "machine-readable") {
    out << "STATS/1\n";
    out << "classes " << s.classes << "\n";
    out << "object_properties " << s.object_properties << "\n";
    out << "data_properties " << s.data_properties << "\n";
    out << "individuals " << s.individuals << "\n";
    out << "assertions " << s.assertions << "\n";
    out << "axioms " << s.axioms << "\n";
  } else {
    out << "classes            " << s.classes << "\n";
    out << "object properties  " << s.object_properties << "\n";
    out << "data properties    " << s.data_properties << "\n";
    out << "individuals        " << s.individuals << "\n";
    out << "assertions         " << s.assertions << "\n";
    out << "axioms             " << s.axioms << "\n";
  }
  return 0;
}

int cmd_catalog_list(const std::vector<std::string>& args, std::ostream& out) {
  Args a = parse_args(args, 2, {});
  need_positionals(a, 0, "");
  for (const CatalogEntry& entry : catalog_entries()) {
    std::vector<std::string> notes;
    if (!entry.layer.empty()) notes.push_back(entry.layer + "/" + entry.level);
    if (!entry.fused_from.empty()) {
      std::string fused = "fused ";
      for (std::size_t i = 0; i < entry.fused_from.size(); ++i) {
        if (i) fused += "+";
        fused += entry.fused_from[i];
      }
      notes.push_back(fused);
    }
    if (entry.has_effects) notes.push_back("effects");
    out << entry.id << "  " << entry.title << "  [";
    for (std::size_t i = 0; i < notes.size(); ++i) {
      if (i) out << ", ";
      out << notes[i];
    }
    out << "]\n";
  }
  return 0;
}

// Writes one entry into `dir`: the ontology and its OpenSCENARIO lowering,
// plus the post-processing directive and pixel mask for effects entries.
void write_catalog_entry(std::ostream& out, const std::filesystem::path& dir,
                         const CatalogEntry& entry, const std::optional<std::string>& date) {
  Ontology scenario = build_catalog_scenario(entry.id);
  std::string stem = entry.has_effects ? entry.id + "_base" : entry.id;
  write_file(out, (dir / (stem + ".onto")).string(), scenario.serialize());
  write_file(out, (dir / (stem + ".xosc")).string(), emit_xml(lower(scenario), date));
  if (entry.has_effects) {
    write_file(out, (dir / (entry.id + "_effects.txt")).string(),
               catalog_effects_directive(entry.id));
    write_file(out, (dir / (entry.id + "_deadpixels.mask")).string(),
               catalog_pixel_mask(entry.id));
  }
}

int cmd_catalog_build(const std::vector<std::string>& args, std::ostream& out) {
  Args a = parse_args(args, 2, {"-o", "--date"});
  need_positionals(a, 1, "catalog entry id");
  const std::string& id = a.positional[0];
  std::filesystem::path dir = a.required_flag("-o");
  std::optional<std::string> date;
  if (const std::string* value = a.flag("--date")) date = *value;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  }
  if (id == "all") {
    for (const CatalogEntry& entry : catalog_entries()) {
      write_catalog_entry(out, dir, entry, date);
    }
    write_file(out, (dir / "stats.txt").string(), catalog_stats());
  } else {
    write_catalog_entry(out, dir, catalog_entry(id), date);
  }
  return 0;
}

int cmd_effects(const std::vector<std::string>& args, std::ostream& out) {
  if (args.size() < 2) throw UsageError{"effects needs a transform name"};
  const std::string& transform = args[1];
  if (transform == "deadpixels") {
    Args a = parse_args(args, 2, {"-o", "--mask"});
    need_positionals(a, 1, "input image");
    const std::string& out_path = a.required_flag("-o");
    const std::string& mask_path = a.required_flag("--mask");
    Pixmap image = Pixmap::load(a.positional[0]);
    apply_dead_pixels(image, PixelMask::load(mask_path));
    write_file(out, out_path, image.serialize());
    return 0;
  }
  if (transform == "overexposure") {
    Args a = parse_args(args, 2, {"-o", "--gain"});
    need_positionals(a, 1, "input image");
    const std::string& out_path = a.required_flag("-o");
    const std::string& text = a.required_flag("--gain");
    double gain = 0.0;
    auto [ptr, errc] = std::from_chars(text.data(), text.data() + text.size(), gain);
    if (errc != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError{"--gain needs a number, got '" + text + "'"};
    }
    Pixmap image = Pixmap::load(a.positional[0]);
    apply_overexposure(image, gain);
    write_file(out, out_path, image.serialize());
    return 0;
  }
  throw UsageError{"unknown effects transform '" + transform + "'"};
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string& command = args[0];
  if (command == "build") return cmd_build(args, out);
  if (command == "convert") return cmd_convert(args, out);
  if (command == "merge") return cmd_merge(args, out);
  if (command == "validate") return cmd_validate(args, out, err);
  if (command == "stats") return cmd_stats(args, out);
  if (command == "catalog") {
    if (args.size() < 2) throw UsageError{"catalog needs 'list' or 'build'"};
    if (args[1] == "list") return cmd_catalog_list(args, out);
    if (args[1] == "build") return cmd_catalog_build(args, out);
    throw UsageError{"unknown catalog command '" + args[1] + "'"};
  }
  if (command == "effects") return cmd_effects(args, out);
  throw UsageError{"unknown command '" + command + "'"};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return 64;
  }
  if (args[0] == "help" || args[0] == "--help" || args[0] == "-h") {
    out << kUsage;
    return 0;
  }
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& u) {
    err << "usage error: " << u.message << "\n";
    err << "run 'ontoscen help' for usage\n";
    return 64;
  } catch (const ValidationError& v) {
    print_violations(err, v.violations());
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    bool io_or_parse = e.code() == ErrorCode::IoError || e.code() == ErrorCode::SyntaxError ||
                       e.code() == ErrorCode::ManifestCorrupt;
    return io_or_parse ? 1 : 2;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace ontoscen
