#include "ontoscen/master.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace ontoscen {

namespace embedded {
extern const char master_schema_txt[];
extern const char carla_assets_txt[];
}  // namespace embedded

std::string_view embedded_schema_text() { return embedded::master_schema_txt; }
std::string_view embedded_assets_text() { return embedded::carla_assets_txt; }

namespace {

constexpr std::size_t kClassCount = 100;
constexpr std::size_t kObjectPropertyCount = 53;
constexpr std::size_t kDataPropertyCount = 44;
constexpr std::size_t kConstantCount = 42;

[[noreturn]] void corrupt(const std::string& detail) {
  throw Error(ErrorCode::ManifestCorrupt, detail);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Strips comments/blank lines; returns (line number, tokens) records.
std::vector<std::pair<std::size_t, std::vector<std::string>>> manifest_records(
    std::string_view text, std::string_view expected_header) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::size_t pos = 0, line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!saw_header) {
      if (line != expected_header) {
        corrupt("expected " + std::string(expected_header) + " header, got '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    records.push_back({line_no, tokenize(line)});
  }
  if (!saw_header) corrupt("empty manifest, expected " + std::string(expected_header) + " header");
  return records;
}

double parse_positive_double(const std::string& text, std::size_t line_no, const char* what) {
  double value = 0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || !(value > 0)) {
    corrupt("line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
  }
  return value;
}

std::set<std::string> split_comma(const std::string& field) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    auto end = field.find(',', start);
    if (end == std::string::npos) end = field.size();
    out.insert(field.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

const AssetManifest& AssetManifest::embedded() {
  static const AssetManifest manifest = AssetManifest::parse(embedded_assets_text());
  return manifest;
}

AssetManifest AssetManifest::parse(std::string_view text) {
  AssetManifest manifest;
  for (const auto& [line_no, tok] : manifest_records(text, "ASSETS/1")) {
    if (tok[0] != "asset") {
      corrupt("line " + std::to_string(line_no) + ": unknown record '" + tok[0] + "'");
    }
    if (tok.size() != 6 && tok.size() != 7) {
      corrupt("line " + std::to_string(line_no) + ": malformed asset record");
    }
    AssetDef def;
    def.category = tok[1];
    def.blueprint_id = tok[2];
    if (!Ontology::valid_name(def.blueprint_id)) {
      corrupt("line " + std::to_string(line_no) + ": bad blueprint id '" + def.blueprint_id + "'");
    }
    def.length = parse_positive_double(tok[3], line_no, "length");
    def.width = parse_positive_double(tok[4], line_no, "width");
    def.height = parse_positive_double(tok[5], line_no, "height");
    if (tok.size() == 7) def.mass = parse_positive_double(tok[6], line_no, "mass");
    manifest.register_asset(std::move(def));
  }
  return manifest;
}

AssetManifest AssetManifest::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure on '" + path + "'");
  return parse(buf.str());
}

void AssetManifest::register_asset(AssetDef def) {
  if (def.category != "car" && def.category != "bicycle" && def.category != "pedestrian" &&
      def.category != "misc") {
    corrupt("unknown asset category '" + def.category + "' for '" + def.blueprint_id + "'");
  }
  if (find(def.blueprint_id)) {
    throw Error(ErrorCode::DuplicateAsset, "asset '" + def.blueprint_id + "' already registered");
  }
  assets_.push_back(std::move(def));
}

const AssetDef* AssetManifest::find(const std::string& blueprint_id) const {
  for (const auto& a : assets_) {
    if (a.blueprint_id == blueprint_id) return &a;
  }
  return nullptr;
}

Ontology build_master() { return build_master(embedded_schema_text(), AssetManifest::embedded()); }

Ontology build_master(std::string_view schema_text, const AssetManifest& assets) {
  struct ClassRec {
    std::string name;
    std::optional<std::string> parent;
    std::string group;
  };
  std::vector<ClassRec> class_recs;
  std::vector<std::vector<std::string>> prop_recs;
  std::vector<std::pair<std::string, std::string>> const_recs;
  std::string group;

  for (const auto& [line_no, tok] : manifest_records(schema_text, "SCHEMA/1")) {
    if (tok[0] == "group") {
      if (tok.size() != 2) corrupt("line " + std::to_string(line_no) + ": malformed group record");
      group = tok[1];
    } else if (tok[0] == "class") {
      if (tok.size() != 3) corrupt("line " + std::to_string(line_no) + ": malformed class record");
      class_recs.push_back({tok[1], tok[2] == "-" ? std::nullopt : std::optional(tok[2]), group});
    } else if (tok[0] == "prop") {
      if (tok.size() != 5 || (tok[1] != "O" && tok[1] != "D")) {
        corrupt("line " + std::to_string(line_no) + ": malformed prop record");
      }
      prop_recs.push_back(tok);
    } else if (tok[0] == "const") {
      if (tok.size() != 3) corrupt("line " + std::to_string(line_no) + ": malformed const record");
      const_recs.push_back({tok[1], tok[2]});
    } else {
      corrupt("line " + std::to_string(line_no) + ": unknown record '" + tok[0] + "'");
    }
  }

  Ontology o;
  std::size_t object_count = 0, data_count = 0;
  try {
    // classes in dependency order (a record may name a parent declared later)
    std::vector<ClassRec> pending = std::move(class_recs);
    while (!pending.empty()) {
      std::size_t before = pending.size();
      std::vector<ClassRec> next;
      for (auto& rec : pending) {
        if (!rec.parent || o.has_class(*rec.parent)) {
          o.add_class(rec.name, rec.parent, rec.group);
        } else {
          next.push_back(std::move(rec));
        }
      }
      if (next.size() == before) {
        corrupt("class hierarchy has a cycle or an unknown parent near '" + next.front().name + "'");
      }
      pending = std::move(next);
    }
    for (const auto& tok : prop_recs) {
      if (tok[1] == "O") {
        o.add_object_property(tok[2], split_comma(tok[3]), split_comma(tok[4]));
        ++object_count;
      } else {
        o.add_data_property(tok[2], split_comma(tok[3]), datatype_from_string(tok[4]));
        ++data_count;
      }
    }
    for (const auto& [name, cls] : const_recs) {
      o.add_individual(name, {cls}, Origin::Constant);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ManifestCorrupt) throw;
    corrupt(std::string("schema manifest: ") + e.what());
  }

  if (o.stats().classes != kClassCount || object_count != kObjectPropertyCount ||
      data_count != kDataPropertyCount || const_recs.size() != kConstantCount) {
    corrupt("schema roster mismatch: " + std::to_string(o.stats().classes) + " classes, " +
            std::to_string(object_count) + " object properties, " + std::to_string(data_count) +
            " data properties, " + std::to_string(const_recs.size()) + " constants (expected " +
            std::to_string(kClassCount) + "/" + std::to_string(kObjectPropertyCount) + "/" +
            std::to_string(kDataPropertyCount) + "/" + std::to_string(kConstantCount) + ")");
  }

  try {
    // -- towns ------------------------------------------------------------
    for (const auto& town : o.individuals_of("Town")) {
      o.assert_data(town, "town_name", make_string_literal(town));
    }

    // -- assets -------------------------------------------------------------
    for (const auto& asset : assets.assets()) {
      o.add_individual(asset.blueprint_id, {"Asset"}, Origin::Constant);
      o.assert_data(asset.blueprint_id, "blueprint_id", make_string_literal(asset.blueprint_id));
      o.assert_data(asset.blueprint_id, "asset_category", make_token_literal(asset.category));
    }
    const AssetDef* ego_asset = assets.find("vehicle.tesla.model3");
    if (!ego_asset) corrupt("asset manifest must provide vehicle.tesla.model3 for the ego");

    // -- default individuals ----------------------------------------------
    auto add = [&o](const std::string& name, const std::string& cls) {
      o.add_individual(name, {cls}, Origin::Default);
    };
    add("ego_vehicle", "Vehicle");
    add("ego_camera_front", "Camera");
    add("ego_bounding_box", "BoundingBox");
    add("default_environment_action", "EnvironmentAction");
    add("default_environment", "Environment");
    add("default_time_of_day", "TimeOfDay");
    add("default_weather", "Weather");
    add("default_sun", "Sun");
    add("default_fog", "Fog");
    add("default_precipitation", "Precipitation");
    add("default_road_condition", "RoadCondition");
    add("sim_start_trigger", "StartTrigger");
    add("sim_start_condition", "SimulationTimeCondition");

    o.assert_object("ego_vehicle", "has_asset", "vehicle.tesla.model3");
    o.assert_object("ego_vehicle", "has_bounding_box", "ego_bounding_box");
    o.assert_object("ego_vehicle", "has_sensor", "ego_camera_front");
    o.assert_data("ego_bounding_box", "bb_center_x", make_literal(0.0));
    o.assert_data("ego_bounding_box", "bb_center_y", make_literal(0.0));
    o.assert_data("ego_bounding_box", "bb_center_z", make_literal(ego_asset->height / 2.0));
    o.assert_data("ego_bounding_box", "bb_length", make_literal(ego_asset->length));
    o.assert_data("ego_bounding_box", "bb_width", make_literal(ego_asset->width));
    o.assert_data("ego_bounding_box", "bb_height", make_literal(ego_asset->height));
    o.assert_data("ego_camera_front", "sensor_type", make_token_literal("camera"));
    o.assert_data("ego_camera_front", "image_width", make_literal(std::int64_t{800}));
    o.assert_data("ego_camera_front", "image_height", make_literal(std::int64_t{600}));
    o.assert_data("ego_camera_front", "field_of_view", make_literal(1.5708));

    o.assert_object("default_environment_action", "has_environment", "default_environment");
    o.assert_object("default_environment", "has_time_of_day", "default_time_of_day");
    o.assert_object("default_environment", "has_weather", "default_weather");
    o.assert_object("default_environment", "has_road_condition", "default_road_condition");
    o.assert_data("default_time_of_day", "animation", make_literal(false));
    o.assert_data("default_time_of_day", "date_time", make_string_literal("2022-06-15T12:00:00"));
    o.assert_object("default_weather", "has_sun", "default_sun");
    o.assert_object("default_weather", "has_fog", "default_fog");
    o.assert_object("default_weather", "has_precipitation", "default_precipitation");
    o.assert_object("default_weather", "has_cloud_state", "free");
    o.assert_data("default_sun", "azimuth", make_literal(0.0));
    o.assert_data("default_sun", "elevation", make_literal(1.31));
    o.assert_data("default_sun", "intensity", make_literal(100000.0));
    o.assert_data("default_fog", "visual_range", make_literal(100000.0));
    o.assert_object("default_precipitation", "has_precipitation_type", "dry");
    o.assert_data("default_precipitation", "precipitation_intensity", make_literal(0.0));
    o.assert_data("default_road_condition", "friction_scale", make_literal(1.0));

    o.assert_object("sim_start_trigger", "has_condition", "sim_start_condition");
    o.assert_data("sim_start_condition", "condition_value", make_literal(0.0));
    o.assert_data("sim_start_condition", "condition_delay", make_literal(0.0));
    o.assert_object("sim_start_condition", "has_rule", "greaterThan");
    o.assert_object("sim_start_condition", "has_condition_edge", "rising");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ManifestCorrupt) throw;
    corrupt(std::string("schema manifest lacks required vocabulary: ") + e.what());
  }

  return o;
}

}  // namespace ontoscen
