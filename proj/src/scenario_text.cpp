#include "ontoscen/scenario_text.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "ontoscen/builder.hpp"
#include "ontoscen/errors.hpp"

namespace ontoscen {

namespace {

struct Token {
  std::string text;   // raw token, quotes already processed for values
  std::size_t line = 0;
  std::size_t col = 0;  // 1-based column of the token start
};

struct Statement {
  Token keyword;
  std::optional<Token> id;             // bare second token, if any
  std::vector<std::pair<std::string, Token>> pairs;  // key -> value token
};

class Parser {
public:
  Parser(std::string_view text, std::string filename, const AssetManifest& assets)
      : text_(text), file_(std::move(filename)), assets_(assets) {}

  Ontology run() {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      std::string_view line = text_.substr(
          start, end == std::string_view::npos ? text_.size() - start : end - start);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      handle_line(line, line_no);
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    if (!builder_) {
      throw Error(ErrorCode::SyntaxError, file_ + ": no scenario statement found");
    }
    return builder_->finalize();
  }

private:
  [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& message) {
    throw Error(ErrorCode::SyntaxError, position(line, col) + ": " + message);
  }

  std::string position(std::size_t line, std::size_t col) const {
    return file_ + ":" + std::to_string(line) + ":" + std::to_string(col);
  }

  // ---- tokenizing -------------------------------------------------------

  void handle_line(std::string_view line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      char c = line[pos];
      if (c == ' ' || c == '\t') {
        ++pos;
        continue;
      }
      if (c == '#') break;  // comment to end of line
      tokens.push_back(scan_token(line, pos, line_no));
    }
    if (tokens.empty()) return;
    execute(build_statement(tokens));
  }

  Token scan_token(std::string_view line, std::size_t& pos, std::size_t line_no) {
    Token token;
    token.line = line_no;
    token.col = pos + 1;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '#') {
      if (line[pos] == '"') {
        ++pos;  // opening quote
        while (true) {
          if (pos >= line.size()) {
            fail(line_no, token.col, "unterminated string");
          }
          char c = line[pos];
          if (c == '"') {
            ++pos;
            break;
          }
          if (c == '\\') {
            if (pos + 1 >= line.size()) fail(line_no, token.col, "unterminated string");
            char esc = line[pos + 1];
            if (esc != '"' && esc != '\\') {
              fail(line_no, token.col, std::string("unknown escape '\\") + esc + "'");
            }
            token.text += esc;
            pos += 2;
            continue;
          }
          token.text += c;
          ++pos;
        }
      } else {
        token.text += line[pos];
        ++pos;
      }
    }
    return token;
  }

  Statement build_statement(const std::vector<Token>& tokens) {
    Statement st;
    st.keyword = tokens[0];
    if (st.keyword.text.find('=') != std::string::npos) {
      fail(st.keyword.line, st.keyword.col, "expected a statement keyword, got a key=value pair");
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      std::size_t eq = t.text.find('=');
      if (eq == std::string::npos) {
        if (i == 1) {
          st.id = t;
          continue;
        }
        fail(t.line, t.col, "expected key=value, got '" + t.text + "'");
      }
      std::string key = t.text.substr(0, eq);
      if (key.empty()) fail(t.line, t.col, "empty key in '" + t.text + "'");
      for (const auto& [existing, value] : st.pairs) {
        (void)value;
        if (existing == key) fail(t.line, t.col, "duplicate key '" + key + "'");
      }
      Token value = t;
      value.text = t.text.substr(eq + 1);
      st.pairs.emplace_back(std::move(key), std::move(value));
    }
    return st;
  }

  // ---- key access -------------------------------------------------------

  const Token* find_key(const Statement& st, const std::string& key) const {
    for (const auto& [k, v] : st.pairs) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  const Token& require_key(const Statement& st, const std::string& key) {
    const Token* t = find_key(st, key);
    if (!t) {
      fail(st.keyword.line, st.keyword.col,
           "'" + st.keyword.text + "' requires a '" + key + "' parameter");
    }
    return *t;
  }

  void reject_unknown_keys(const Statement& st, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : st.pairs) {
      bool known = false;
      for (const char* a : allowed) {
        if (key == a) {
          known = true;
          break;
        }
      }
      if (!known) {
        fail(value.line, value.col,
             "unknown key '" + key + "' for '" + st.keyword.text + "'");
      }
    }
  }

  double number(const Token& t) {
    double value = 0;
    const char* begin = t.text.data();
    const char* end = begin + t.text.size();
    auto [p, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || p != end || t.text.empty()) {
      fail(t.line, t.col, "expected a number, got '" + t.text + "'");
    }
    return value;
  }

  std::int64_t integer(const Token& t) {
    std::int64_t value = 0;
    const char* begin = t.text.data();
    const char* end = begin + t.text.size();
    auto [p, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || p != end || t.text.empty()) {
      fail(t.line, t.col, "expected an integer, got '" + t.text + "'");
    }
    return value;
  }

  bool boolean(const Token& t) {
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    fail(t.line, t.col, "expected true or false, got '" + t.text + "'");
  }

  // aliases resolve to individual names; unknown aliases pass through so
  // master-ontology names (sim_start_condition, Town01, ...) stay usable
  std::string ref(const Token& t) const {
    auto it = aliases_.find(t.text);
    return it == aliases_.end() ? t.text : it->second;
  }

  std::vector<std::string> ref_list(const Token& t) const {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= t.text.size()) {
      std::size_t comma = t.text.find(',', start);
      std::string part = t.text.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      Token item = t;
      item.text = part;
      out.push_back(ref(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  void bind(const std::optional<Token>& id, const std::string& individual) {
    if (!id) return;
    if (id->text == "root" || aliases_.count(id->text)) {
      fail(id->line, id->col, "alias '" + id->text + "' is already defined");
    }
    aliases_.emplace(id->text, individual);
  }

  const Token& require_id(const Statement& st) {
    if (!st.id) {
      fail(st.keyword.line, st.keyword.col, "'" + st.keyword.text + "' requires a name");
    }
    return *st.id;
  }

  void reject_id(const Statement& st) {
    if (st.id) {
      fail(st.id->line, st.id->col, "'" + st.keyword.text + "' does not take a name");
    }
  }

  // ---- statements -------------------------------------------------------

  void execute(const Statement& st) {
    // builder failures inherit the statement position; errors thrown by the
    // parser itself already carry one and pass through untouched
    try {
      if (st.keyword.text == "scenario") {
        scenario_statement(st);
        return;
      }
      if (!builder_) {
        fail(st.keyword.line, st.keyword.col, "the first statement must be 'scenario'");
      }
      dispatch(st);
    } catch (const Error& e) {
      std::string detail = e.what();
      std::size_t skip = std::strlen(to_string(e.code())) + 2;
      if (detail.size() > skip) detail = detail.substr(skip);
      if (detail.rfind(file_ + ":", 0) == 0) throw;
      throw Error(e.code(),
                  position(st.keyword.line, st.keyword.col) + ": " + detail);
    }
  }

  void scenario_statement(const Statement& st) {
    if (builder_) {
      fail(st.keyword.line, st.keyword.col, "only one scenario statement is allowed");
    }
    reject_id(st);
    reject_unknown_keys(st, {"town", "description"});
    const Token& town = require_key(st, "town");
    builder_.emplace(build_master(), ref(town), assets_);
    aliases_.emplace("root", builder_->root());
    if (const Token* description = find_key(st, "description")) {
      builder_->set_description(description->text);
    }
  }

  void dispatch(const Statement& st) {
    const std::string& kw = st.keyword.text;
    ScenarioBuilder& b = *builder_;

    static const std::map<std::string, Structural> kStructural = {
        {"storyboard", Structural::Storyboard}, {"init", Structural::Init},
        {"story", Structural::Story},           {"act", Structural::Act},
        {"maneuver_group", Structural::ManeuverGroup},
        {"maneuver", Structural::Maneuver},     {"event", Structural::Event},
    };
    if (auto it = kStructural.find(kw); it != kStructural.end()) {
      const Token& id = require_id(st);
      std::string parent;
      if (it->second == Structural::Storyboard) {
        reject_unknown_keys(st, {});
        parent = b.root();
      } else {
        reject_unknown_keys(st, {"parent"});
        parent = ref(require_key(st, "parent"));
      }
      bind(id, b.structural_element(it->second, parent));
      return;
    }

    if (kw == "entity") {
      entity_statement(st);
    } else if (kw == "dynamics") {
      const Token& id = require_id(st);
      reject_unknown_keys(st, {"shape", "dimension", "value"});
      bind(id, b.new_transition_dynamics(ref(require_key(st, "shape")),
                                         ref(require_key(st, "dimension")),
                                         number(require_key(st, "value"))));
    } else if (kw == "environment") {
      environment_statement(st);
    } else if (kw == "action") {
      action_statement(st);
    } else if (kw == "condition") {
      condition_statement(st);
    } else if (kw == "trigger") {
      trigger_statement(st);
    } else if (kw == "init_action") {
      reject_id(st);
      reject_unknown_keys(st, {"init", "action"});
      b.add_init_action(ref(require_key(st, "init")), ref(require_key(st, "action")));
    } else if (kw == "attach_action") {
      reject_id(st);
      reject_unknown_keys(st, {"event", "action"});
      b.attach_action(ref(require_key(st, "event")), ref(require_key(st, "action")));
    } else if (kw == "actor") {
      reject_id(st);
      reject_unknown_keys(st, {"group", "entity"});
      b.add_actor(ref(require_key(st, "group")), ref(require_key(st, "entity")));
    } else if (kw == "corner_case") {
      reject_id(st);
      reject_unknown_keys(st, {"layer", "level", "description"});
      b.set_corner_case(require_key(st, "layer").text, require_key(st, "level").text,
                        require_key(st, "description").text);
    } else {
      fail(st.keyword.line, st.keyword.col, "unknown statement '" + kw + "'");
    }
  }

  void entity_statement(const Statement& st) {
    const Token& id = require_id(st);
    reject_unknown_keys(st, {"kind", "asset"});
    const Token& kind = require_key(st, "kind");
    static const std::map<std::string, EntityKind> kKinds = {
        {"ego", EntityKind::EgoVehicle},      {"car", EntityKind::Vehicle},
        {"pedestrian", EntityKind::Pedestrian}, {"bicycle", EntityKind::Bicycle},
        {"misc", EntityKind::Misc},
    };
    auto it = kKinds.find(kind.text);
    if (it == kKinds.end()) {
      fail(kind.line, kind.col, "unknown entity kind '" + kind.text + "'");
    }
    std::optional<std::string> asset;
    if (const Token* a = find_key(st, "asset")) asset = a->text;
    bind(id, builder_->new_entity(it->second, asset));
  }

  void environment_statement(const Statement& st) {
    const Token& id = require_id(st);
    reject_unknown_keys(st, {"date_time", "animation", "sun_azimuth", "sun_elevation",
                             "sun_intensity", "fog_visual_range", "cloud_state",
                             "precipitation_type", "precipitation_intensity", "friction_scale"});
    EnvironmentSpec spec;
    if (const Token* t = find_key(st, "date_time")) spec.date_time = t->text;
    if (const Token* t = find_key(st, "animation")) spec.animation = boolean(*t);
    if (const Token* t = find_key(st, "sun_azimuth")) spec.sun_azimuth = number(*t);
    if (const Token* t = find_key(st, "sun_elevation")) spec.sun_elevation = number(*t);
    if (const Token* t = find_key(st, "sun_intensity")) spec.sun_intensity = number(*t);
    if (const Token* t = find_key(st, "fog_visual_range")) spec.fog_visual_range = number(*t);
    if (const Token* t = find_key(st, "cloud_state")) spec.cloud_state = ref(*t);
    if (const Token* t = find_key(st, "precipitation_type")) spec.precipitation_type = ref(*t);
    if (const Token* t = find_key(st, "precipitation_intensity")) {
      spec.precipitation_intensity = number(*t);
    }
    if (const Token* t = find_key(st, "friction_scale")) spec.friction_scale = number(*t);
    bind(id, builder_->new_environment(spec));
  }

  void action_statement(const Statement& st) {
    const Token& id = require_id(st);
    const Token& kind = require_key(st, "kind");
    ScenarioBuilder& b = *builder_;
    std::string created;
    if (kind.text == "teleport_world") {
      reject_unknown_keys(st, {"kind", "entity", "x", "y", "z", "heading"});
      created = b.new_action(TeleportToWorld{
          ref(require_key(st, "entity")), number(require_key(st, "x")),
          number(require_key(st, "y")), number(require_key(st, "z")),
          number(require_key(st, "heading"))});
    } else if (kind.text == "teleport_relative") {
      reject_unknown_keys(st, {"kind", "entity", "reference", "dx", "dy", "dz"});
      created = b.new_action(TeleportRelative{
          ref(require_key(st, "entity")), ref(require_key(st, "reference")),
          number(require_key(st, "dx")), number(require_key(st, "dy")),
          number(require_key(st, "dz"))});
    } else if (kind.text == "speed") {
      reject_unknown_keys(st, {"kind", "entity", "target", "dynamics"});
      created = b.new_action(ChangeSpeed{ref(require_key(st, "entity")),
                                         number(require_key(st, "target")),
                                         ref(require_key(st, "dynamics"))});
    } else if (kind.text == "lane_change") {
      reject_unknown_keys(st, {"kind", "entity", "reference", "offset", "dynamics"});
      created = b.new_action(RelativeLaneChange{
          ref(require_key(st, "entity")), ref(require_key(st, "reference")),
          integer(require_key(st, "offset")), ref(require_key(st, "dynamics"))});
    } else if (kind.text == "change_environment") {
      reject_unknown_keys(st, {"kind", "environment"});
      created = b.new_action(ChangeEnvironment{ref(require_key(st, "environment"))});
    } else {
      fail(kind.line, kind.col, "unknown action kind '" + kind.text + "'");
    }
    bind(id, created);
  }

  void condition_statement(const Statement& st) {
    const Token& id = require_id(st);
    const Token& kind = require_key(st, "kind");
    ScenarioBuilder& b = *builder_;
    double delay = 0.0;
    std::string edge = "rising";
    if (const Token* t = find_key(st, "delay")) delay = number(*t);
    if (const Token* t = find_key(st, "edge")) edge = ref(*t);

    std::string created;
    if (kind.text == "simulation_time") {
      reject_unknown_keys(st, {"kind", "value", "rule", "delay", "edge"});
      SimulationTime spec{number(require_key(st, "value"))};
      if (const Token* t = find_key(st, "rule")) spec.rule = ref(*t);
      created = b.new_condition(spec, delay, edge);
    } else if (kind.text == "traveled_distance") {
      reject_unknown_keys(st, {"kind", "entity", "value", "delay", "edge"});
      created = b.new_condition(TraveledDistance{ref(require_key(st, "entity")),
                                                 number(require_key(st, "value"))},
                                delay, edge);
    } else if (kind.text == "relative_distance") {
      reject_unknown_keys(st, {"kind", "entity", "reference", "value", "rule", "distance_type",
                               "freespace", "delay", "edge"});
      RelativeDistance spec{ref(require_key(st, "entity")), ref(require_key(st, "reference")),
                            number(require_key(st, "value"))};
      if (const Token* t = find_key(st, "rule")) spec.rule = ref(*t);
      if (const Token* t = find_key(st, "distance_type")) spec.distance_type = ref(*t);
      if (const Token* t = find_key(st, "freespace")) spec.freespace = boolean(*t);
      created = b.new_condition(spec, delay, edge);
    } else if (kind.text == "element_state") {
      reject_unknown_keys(st, {"kind", "element", "state", "delay", "edge"});
      ElementState spec{ref(require_key(st, "element"))};
      if (const Token* t = find_key(st, "state")) spec.state = ref(*t);
      created = b.new_condition(spec, delay, edge);
    } else {
      fail(kind.line, kind.col, "unknown condition kind '" + kind.text + "'");
    }
    bind(id, created);
  }

  void trigger_statement(const Statement& st) {
    const Token& id = require_id(st);
    reject_unknown_keys(st, {"kind", "attach", "conditions", "name"});
    const Token& kind = require_key(st, "kind");
    TriggerKind tk;
    if (kind.text == "start") {
      tk = TriggerKind::Start;
    } else if (kind.text == "stop") {
      tk = TriggerKind::Stop;
    } else {
      fail(kind.line, kind.col, "trigger kind must be start or stop, got '" + kind.text + "'");
    }
    std::optional<std::string> name;
    if (const Token* t = find_key(st, "name")) name = t->text;
    bind(id, builder_->new_trigger(tk, ref_list(require_key(st, "conditions")),
                                   ref(require_key(st, "attach")), name));
  }

  std::string_view text_;
  std::string file_;
  const AssetManifest& assets_;
  std::optional<ScenarioBuilder> builder_;
  std::map<std::string, std::string> aliases_;
};

}  // namespace

Ontology parse_scenario_text(std::string_view text, const std::string& filename,
                             const AssetManifest& assets) {
  return Parser(text, filename, assets).run();
}

Ontology load_scenario_text(const std::string& path, const AssetManifest& assets) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path, assets);
}

}  // namespace ontoscen
