#include "ontoscen/fusion.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontoscen/builder.hpp"
#include "ontoscen/errors.hpp"

namespace ontoscen {

namespace {

constexpr char kSep = '\x1f';

struct InputInfo {
  const Ontology* onto = nullptr;
  std::string root;
  std::string storyboard;
  std::string init;
  std::string town;        // individual name
  std::string town_label;  // its town_name literal
  bool custom_town = false;
};

std::string describe_input(std::size_t index) {
  return "input " + std::to_string(index);
}

InputInfo inspect_input(const Ontology& o, std::size_t index) {
  auto violations = validate_scenario(o);
  if (!violations.empty()) {
    throw Error(ErrorCode::InputInvalid,
                describe_input(index) + " is not a valid scenario (" +
                    violations.front().rule_id + ": " + violations.front().detail + ")");
  }
  auto roots = o.individuals_of("Scenario");
  if (roots.size() != 1) {
    throw Error(ErrorCode::InputInvalid, describe_input(index) + " has " +
                                             std::to_string(roots.size()) +
                                             " Scenario individuals, expected exactly one");
  }
  InputInfo info;
  info.onto = &o;
  info.root = roots.front();
  auto storyboards = o.objects_of(info.root, "has_storyboard");
  auto towns = o.objects_of(info.root, "has_town");
  if (storyboards.size() != 1 || towns.size() != 1) {
    throw Error(ErrorCode::InputInvalid,
                describe_input(index) + " root '" + info.root +
                    "' must have exactly one storyboard and one town");
  }
  info.storyboard = storyboards.front();
  info.town = towns.front();
  auto inits = o.objects_of(info.storyboard, "has_init");
  if (inits.size() != 1) {
    throw Error(ErrorCode::InputInvalid,
                describe_input(index) + " storyboard '" + info.storyboard +
                    "' must have exactly one init");
  }
  info.init = inits.front();
  auto label = o.literal_of(info.town, "town_name");
  if (!label) {
    throw Error(ErrorCode::InputInvalid, describe_input(index) + " town '" + info.town +
                                             "' has no town_name");
  }
  info.town_label = label->lexical;
  info.custom_town = o.individual(info.town).origin == Origin::Scenario;
  return info;
}

// Direct assertions of one individual, order-insensitive; used to compare the
// shared ego across inputs.
std::string direct_config(const Ontology& o, const std::string& name) {
  std::vector<std::string> parts;
  for (const auto& a : o.assertions_of(name)) {
    if (a.is_object) {
      parts.push_back(a.property + kSep + a.object);
    } else {
      parts.push_back(a.property + kSep + a.literal.lexical + kSep +
                      to_string(a.literal.datatype));
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string joined;
  for (const auto& p : parts) {
    joined += p;
    joined += '\n';
  }
  return joined;
}

// Structural fingerprint of a scenario-origin individual: classes plus
// sorted assertions, recursing into scenario-origin targets so that renamed
// but otherwise identical subtrees compare equal.
void fingerprint_into(const Ontology& o, const std::string& name,
                      std::set<std::string>& on_path, std::string& out) {
  const IndividualDef& ind = o.individual(name);
  if (ind.origin != Origin::Scenario) {
    out += '@';
    out += name;
    return;
  }
  if (!on_path.insert(name).second) {
    out += "@cycle";
    return;
  }
  std::vector<std::string> parts;
  for (const auto& a : o.assertions_of(name)) {
    std::string part = a.property;
    if (a.is_object) {
      part += '>';
      fingerprint_into(o, a.object, on_path, part);
    } else {
      part += '=';
      part += a.literal.lexical;
      part += '^';
      part += to_string(a.literal.datatype);
    }
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end());
  out += '{';
  for (const auto& cls : ind.classes) {
    out += cls;
    out += ',';
  }
  out += '|';
  for (const auto& part : parts) {
    out += part;
    out += ';';
  }
  out += '}';
  on_path.erase(name);
}

std::string fingerprint(const Ontology& o, const std::string& name) {
  std::set<std::string> on_path;
  std::string out;
  fingerprint_into(o, name, on_path, out);
  return out;
}

std::string class_key(const IndividualDef& ind) {
  std::string key;
  for (const auto& cls : ind.classes) {
    if (!key.empty()) key += '+';
    key += cls;
  }
  return key;
}

// Copies the class table; parents may sort after their children, so apply in
// dependency order.
void copy_schema(const Ontology& in, Ontology& out) {
  std::vector<const ClassDef*> pending;
  pending.reserve(in.classes().size());
  for (const auto& [name, def] : in.classes()) pending.push_back(&def);
  while (!pending.empty()) {
    std::vector<const ClassDef*> next;
    for (const ClassDef* cls : pending) {
      if (!cls->parent || out.has_class(*cls->parent)) {
        out.add_class(cls->name, cls->parent, cls->group);
      } else {
        next.push_back(cls);
      }
    }
    if (next.size() == pending.size()) {
      throw Error(ErrorCode::InputInvalid, "input 1 has an unresolvable class hierarchy");
    }
    pending = std::move(next);
  }
  for (const auto& [name, def] : in.properties()) {
    if (def.kind == PropertyKind::Object) {
      out.add_object_property(def.name, def.domains, def.ranges);
    } else {
      out.add_data_property(def.name, def.domains, def.datatype);
    }
  }
}

}  // namespace

FusionResult fuse(const std::vector<Ontology>& inputs) {
  if (inputs.size() < 2) {
    throw Error(ErrorCode::InputInvalid,
                "fuse needs at least two scenarios, got " + std::to_string(inputs.size()));
  }

  std::vector<InputInfo> infos;
  infos.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    infos.push_back(inspect_input(inputs[i], i + 1));
  }

  for (std::size_t i = 1; i < infos.size(); ++i) {
    if (infos[i].town_label != infos[0].town_label) {
      throw Error(ErrorCode::TownMismatch, "input 1 is set in '" + infos[0].town_label +
                                               "' but " + describe_input(i + 1) + " in '" +
                                               infos[i].town_label + "'");
    }
  }

  std::string ego_config;
  std::size_t ego_config_from = 0;
  for (std::size_t i = 0; i < infos.size(); ++i) {
    const Ontology& o = *infos[i].onto;
    if (!o.has_individual("ego_vehicle")) continue;
    std::string config = direct_config(o, "ego_vehicle");
    if (ego_config_from == 0) {
      ego_config = std::move(config);
      ego_config_from = i + 1;
    } else if (config != ego_config) {
      throw Error(ErrorCode::EgoConflict,
                  "ego_vehicle is configured differently in " +
                      describe_input(ego_config_from) + " and " + describe_input(i + 1));
    }
  }

  FusionReport report;
  for (const auto& info : infos) report.inputs.push_back(info.root);

  Ontology out;
  copy_schema(*infos[0].onto, out);

  // master content from the first input; later inputs' copies are skipped
  for (const auto& [name, ind] : infos[0].onto->individuals()) {
    if (ind.origin != Origin::Scenario) out.add_individual(ind.name, ind.classes, ind.origin);
  }

  std::set<std::string> seen_assertions;
  auto mark_object = [&](const std::string& s, const std::string& p, const std::string& o) {
    return seen_assertions.insert(s + kSep + p + kSep + 'O' + o).second;
  };
  auto mark_data = [&](const std::string& s, const std::string& p, const Literal& lit) {
    return seen_assertions
        .insert(s + kSep + p + kSep + 'D' + lit.lexical + kSep + to_string(lit.datatype))
        .second;
  };
  auto put_object = [&](const std::string& s, const std::string& p, const std::string& o) {
    if (mark_object(s, p, o)) out.assert_object(s, p, o);
  };
  auto put_data = [&](const std::string& s, const std::string& p, const Literal& lit) {
    if (mark_data(s, p, lit)) out.assert_data(s, p, lit);
  };

  const std::string root = "indiv_Scenario1";
  const std::string storyboard = "indiv_Storyboard1";
  const std::string init = "indiv_Init1";
  out.add_individual(root, {"Scenario"}, Origin::Scenario);
  out.add_individual(storyboard, {"Storyboard"}, Origin::Scenario);
  out.add_individual(init, {"Init"}, Origin::Scenario);
  put_object(root, "has_storyboard", storyboard);
  put_object(storyboard, "has_init", init);

  // one town for the fused scenario: the shared constant if any input uses
  // one, otherwise a fresh individual carrying the shared name
  std::string fused_town;
  for (const auto& info : infos) {
    if (!info.custom_town) {
      fused_town = info.town;
      break;
    }
  }
  if (fused_town.empty()) {
    fused_town = "indiv_Town1";
    out.add_individual(fused_town, {"Town"}, Origin::Scenario);
    put_data(fused_town, "town_name",
             infos[0].onto->literal_of(infos[0].town, "town_name").value());
  }
  put_object(root, "has_town", fused_town);

  // init-action conflict state for entities shared between inputs:
  // (entity, action classes) -> fingerprints carried so far
  struct Carried {
    std::size_t input = 0;
    std::string print;
  };
  std::map<std::string, std::vector<Carried>> carried;

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Ontology& in = inputs[i];
    const InputInfo& info = infos[i];
    const std::size_t input_no = i + 1;

    if (i > 0) {
      for (const auto& [name, ind] : in.individuals()) {
        if (ind.origin == Origin::Scenario) continue;
        if (out.has_individual(name)) {
          ++report.defaults_deduplicated;
        } else {
          out.add_individual(ind.name, ind.classes, ind.origin);
        }
      }
    }

    // decide which init actions survive shared-entity conflicts
    std::set<std::string> dropped_actions;
    for (const std::string& action : in.objects_of(info.init, "has_init_action")) {
      const IndividualDef& action_def = in.individual(action);
      if (action_def.origin != Origin::Scenario) continue;  // shared defaults dedupe by name
      auto entity = in.object_of(action, "applies_to");
      if (!entity || in.individual(*entity).origin == Origin::Scenario) continue;
      std::string key = *entity + kSep + class_key(action_def);
      std::string print = fingerprint(in, action);
      auto& fights = carried[key];
      bool keep = fights.empty();
      for (const Carried& c : fights) {
        if (c.input == input_no || c.print == print) {
          keep = true;
          break;
        }
      }
      if (keep) {
        fights.push_back({input_no, print});
      } else {
        dropped_actions.insert(action);
        report.dropped.push_back({input_no, action, *entity, class_key(action_def)});
      }
    }

    // with dropped init links removed, only what stays reachable is copied
    std::map<std::string, std::vector<std::string>> edges;
    for (const Assertion& a : in.assertions()) {
      if (!a.is_object) continue;
      if (a.subject == info.init && a.property == "has_init_action" &&
          dropped_actions.count(a.object)) {
        continue;
      }
      edges[a.subject].push_back(a.object);
    }
    std::set<std::string> reachable{info.root};
    std::deque<std::string> queue{info.root};
    while (!queue.empty()) {
      std::string current = std::move(queue.front());
      queue.pop_front();
      auto it = edges.find(current);
      if (it == edges.end()) continue;
      for (const std::string& next : it->second) {
        if (reachable.insert(next).second) queue.push_back(next);
      }
    }

    std::map<std::string, std::string> renamed{{info.root, root},
                                               {info.storyboard, storyboard},
                                               {info.init, init},
                                               {info.town, fused_town}};
    for (const auto& [name, ind] : in.individuals()) {
      if (ind.origin != Origin::Scenario) continue;
      if (renamed.count(name)) continue;
      if (!reachable.count(name)) continue;
      std::string target = name;
      if (out.has_individual(target)) {
        target = name + "__" + std::to_string(input_no);
        for (std::size_t bump = 2; out.has_individual(target); ++bump) {
          target = name + "__" + std::to_string(input_no) + "_" + std::to_string(bump);
        }
        report.renames.push_back({input_no, name, target});
      }
      renamed.emplace(name, target);
      out.add_individual(target, ind.classes, Origin::Scenario);
    }

    auto resolve = [&](const std::string& name) -> const std::string* {
      auto it = renamed.find(name);
      if (it != renamed.end()) return &it->second;
      if (in.individual(name).origin != Origin::Scenario) return &name;
      return nullptr;  // excluded along with a dropped action
    };

    for (const Assertion& a : in.assertions()) {
      if (a.is_object && a.subject == info.init && a.property == "has_init_action" &&
          dropped_actions.count(a.object)) {
        continue;
      }
      const std::string* subject = resolve(a.subject);
      if (!subject) continue;
      if (a.is_object) {
        const std::string* object = resolve(a.object);
        if (!object) continue;
        put_object(*subject, a.property, *object);
      } else {
        put_data(*subject, a.property, a.literal);
      }
    }
  }

  report.output_root = root;
  report.individuals_merged = out.stats().individuals;
  report.stories_merged = out.objects_of(storyboard, "has_story").size();
  report.entities_merged = out.objects_of(root, "has_entity").size();
  report.init_actions_merged = out.objects_of(init, "has_init_action").size();

  auto violations = validate_scenario(out);
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }

  return {std::move(out), std::move(report)};
}

}  // namespace ontoscen
