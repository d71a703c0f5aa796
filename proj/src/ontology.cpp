#include "ontoscen/ontology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ontoscen {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::BadName: return "BadName";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::DuplicateAssertion: return "DuplicateAssertion";
    case ErrorCode::BadLiteral: return "BadLiteral";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ManifestCorrupt: return "ManifestCorrupt";
    case ErrorCode::DuplicateAsset: return "DuplicateAsset";
    case ErrorCode::BadParentKind: return "BadParentKind";
    case ErrorCode::MissingPayload: return "MissingPayload";
    case ErrorCode::AssetKindMismatch: return "AssetKindMismatch";
    case ErrorCode::DuplicateEgo: return "DuplicateEgo";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::MissingDynamics: return "MissingDynamics";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::UnknownElementRef: return "UnknownElementRef";
    case ErrorCode::EmptyConditions: return "EmptyConditions";
    case ErrorCode::BadAttachTarget: return "BadAttachTarget";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::TownMismatch: return "TownMismatch";
    case ErrorCode::EgoConflict: return "EgoConflict";
    case ErrorCode::InputInvalid: return "InputInvalid";
    case ErrorCode::UnloweredIndividual: return "UnloweredIndividual";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadGain: return "BadGain";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

std::string ValidationError::format(const std::vector<RuleViolation>& violations) {
  std::ostringstream os;
  os << "scenario failed validation with " << violations.size() << " violation(s)";
  for (const auto& v : violations) {
    os << "\n  rule " << v.rule << " (" << v.rule_id << ") at " << v.individual << ": " << v.detail;
  }
  return os.str();
}

Datatype datatype_from_string(std::string_view text) {
  if (text == "double") return Datatype::Double;
  if (text == "integer") return Datatype::Integer;
  if (text == "boolean") return Datatype::Boolean;
  if (text == "string") return Datatype::String;
  if (text == "token") return Datatype::Token;
  throw Error(ErrorCode::SyntaxError, "unknown datatype '" + std::string(text) + "'");
}

const char* to_string(Datatype datatype) {
  switch (datatype) {
    case Datatype::Double: return "double";
    case Datatype::Integer: return "integer";
    case Datatype::Boolean: return "boolean";
    case Datatype::String: return "string";
    case Datatype::Token: return "token";
  }
  return "string";
}

Origin origin_from_string(std::string_view text) {
  if (text == "constant") return Origin::Constant;
  if (text == "default") return Origin::Default;
  if (text == "scenario") return Origin::Scenario;
  throw Error(ErrorCode::SyntaxError, "unknown origin '" + std::string(text) + "'");
}

const char* to_string(Origin origin) {
  switch (origin) {
    case Origin::Constant: return "constant";
    case Origin::Default: return "default";
    case Origin::Scenario: return "scenario";
  }
  return "scenario";
}

std::string canonical_double(double value) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

std::string canonical_integer(std::int64_t value) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

namespace {

bool valid_string_lexical(std::string_view text) {
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (c == '"' || u < 0x20 || u == 0x7f) return false;
  }
  return true;
}

bool valid_token_lexical(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == ':' || c == '+' || c == '-';
    if (!ok) return false;
  }
  return true;
}

// Checks a lexical form against its datatype; canonical forms only, so that
// serialization round-trips byte for byte.
void check_lexical(const std::string& lexical, Datatype datatype) {
  switch (datatype) {
    case Datatype::Double: {
      double value = 0;
      auto r = std::from_chars(lexical.data(), lexical.data() + lexical.size(), value);
      if (r.ec != std::errc() || r.ptr != lexical.data() + lexical.size() ||
          canonical_double(value) != lexical) {
        throw Error(ErrorCode::BadLiteral, "non-canonical double '" + lexical + "'");
      }
      return;
    }
    case Datatype::Integer: {
      std::int64_t value = 0;
      auto r = std::from_chars(lexical.data(), lexical.data() + lexical.size(), value);
      if (r.ec != std::errc() || r.ptr != lexical.data() + lexical.size() ||
          canonical_integer(value) != lexical) {
        throw Error(ErrorCode::BadLiteral, "non-canonical integer '" + lexical + "'");
      }
      return;
    }
    case Datatype::Boolean:
      if (lexical != "true" && lexical != "false") {
        throw Error(ErrorCode::BadLiteral, "boolean must be true or false, got '" + lexical + "'");
      }
      return;
    case Datatype::String:
      if (!valid_string_lexical(lexical)) {
        throw Error(ErrorCode::BadLiteral, "string literal contains a quote or control character");
      }
      return;
    case Datatype::Token:
      if (!valid_token_lexical(lexical)) {
        throw Error(ErrorCode::BadLiteral, "bad token literal '" + lexical + "'");
      }
      return;
  }
}

std::string join_sorted(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

}  // namespace

Literal make_literal(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::BadLiteral, "double literal must be finite");
  }
  return {canonical_double(value), Datatype::Double};
}

Literal make_literal(std::int64_t value) { return {canonical_integer(value), Datatype::Integer}; }

Literal make_literal(bool value) { return {value ? "true" : "false", Datatype::Boolean}; }

Literal make_string_literal(std::string_view value) {
  if (!valid_string_lexical(value)) {
    throw Error(ErrorCode::BadLiteral, "string literal contains a quote or control character");
  }
  return {std::string(value), Datatype::String};
}

Literal make_token_literal(std::string_view value) {
  if (!valid_token_lexical(value)) {
    throw Error(ErrorCode::BadLiteral, "bad token literal '" + std::string(value) + "'");
  }
  return {std::string(value), Datatype::Token};
}

bool Ontology::valid_name(std::string_view name) {
  if (name.empty()) return false;
  char first = name[0];
  if (!((first >= 'A' && first <= 'Z') || (first >= 'a' && first <= 'z'))) return false;
  for (char c : name.substr(1)) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void Ontology::add_class(std::string name, std::optional<std::string> parent, std::string group) {
  if (!valid_name(name)) throw Error(ErrorCode::BadName, "bad class name '" + name + "'");
  if (classes_.count(name)) throw Error(ErrorCode::DuplicateName, "class '" + name + "' already exists");
  if (parent && !classes_.count(*parent)) {
    throw Error(ErrorCode::UnknownParent, "class '" + name + "' references unknown parent '" + *parent + "'");
  }
  classes_[name] = ClassDef{name, std::move(parent), std::move(group)};
}

void Ontology::check_classes_exist(const std::set<std::string>& names, const std::string& context) const {
  if (names.empty()) throw Error(ErrorCode::InvariantViolation, context + " requires at least one class");
  for (const auto& n : names) {
    if (!classes_.count(n)) throw Error(ErrorCode::UnknownClass, context + " references unknown class '" + n + "'");
  }
}

void Ontology::add_object_property(std::string name, std::set<std::string> domains,
                                   std::set<std::string> ranges) {
  if (!valid_name(name)) throw Error(ErrorCode::BadName, "bad property name '" + name + "'");
  if (properties_.count(name)) {
    throw Error(ErrorCode::DuplicateName, "property '" + name + "' already exists");
  }
  check_classes_exist(domains, "domain of '" + name + "'");
  check_classes_exist(ranges, "range of '" + name + "'");
  properties_[name] = PropertyDef{name, PropertyKind::Object, std::move(domains), std::move(ranges),
                                  Datatype::String};
}

void Ontology::add_data_property(std::string name, std::set<std::string> domains, Datatype datatype) {
  if (!valid_name(name)) throw Error(ErrorCode::BadName, "bad property name '" + name + "'");
  if (properties_.count(name)) {
    throw Error(ErrorCode::DuplicateName, "property '" + name + "' already exists");
  }
  check_classes_exist(domains, "domain of '" + name + "'");
  properties_[name] = PropertyDef{name, PropertyKind::Data, std::move(domains), {}, datatype};
}

void Ontology::add_individual(std::string name, std::set<std::string> classes, Origin origin) {
  if (!valid_name(name)) throw Error(ErrorCode::BadName, "bad individual name '" + name + "'");
  if (individuals_.count(name)) {
    throw Error(ErrorCode::DuplicateName, "individual '" + name + "' already exists");
  }
  check_classes_exist(classes, "individual '" + name + "'");
  individuals_[name] = IndividualDef{name, std::move(classes), origin};
}

void Ontology::assert_object(const std::string& subject, const std::string& property,
                             const std::string& object) {
  auto subj = individuals_.find(subject);
  if (subj == individuals_.end()) throw Error(ErrorCode::UnknownName, "unknown individual '" + subject + "'");
  auto prop = properties_.find(property);
  if (prop == properties_.end()) throw Error(ErrorCode::UnknownName, "unknown property '" + property + "'");
  if (prop->second.kind != PropertyKind::Object) {
    throw Error(ErrorCode::KindMismatch, "'" + property + "' is a data property");
  }
  auto obj = individuals_.find(object);
  if (obj == individuals_.end()) throw Error(ErrorCode::UnknownName, "unknown individual '" + object + "'");

  auto satisfies = [this](const IndividualDef& ind, const std::set<std::string>& classes) {
    for (const auto& c : classes) {
      if (individual_is_a(ind.name, c)) return true;
    }
    return false;
  };
  if (!satisfies(subj->second, prop->second.domains)) {
    throw Error(ErrorCode::DomainViolation,
                "'" + subject + "' is outside the domain of '" + property + "'");
  }
  if (!satisfies(obj->second, prop->second.ranges)) {
    throw Error(ErrorCode::RangeViolation,
                "'" + object + "' is outside the range of '" + property + "'");
  }
  Assertion a{subject, property, object, {}, true};
  if (std::find(assertions_.begin(), assertions_.end(), a) != assertions_.end()) {
    throw Error(ErrorCode::DuplicateAssertion,
                subject + " " + property + " " + object + " already asserted");
  }
  assertions_.push_back(std::move(a));
}

void Ontology::assert_data(const std::string& subject, const std::string& property, Literal literal) {
  auto subj = individuals_.find(subject);
  if (subj == individuals_.end()) throw Error(ErrorCode::UnknownName, "unknown individual '" + subject + "'");
  auto prop = properties_.find(property);
  if (prop == properties_.end()) throw Error(ErrorCode::UnknownName, "unknown property '" + property + "'");
  if (prop->second.kind != PropertyKind::Data) {
    throw Error(ErrorCode::KindMismatch, "'" + property + "' is an object property");
  }
  check_lexical(literal.lexical, literal.datatype);
  if (literal.datatype != prop->second.datatype) {
    throw Error(ErrorCode::RangeViolation, "'" + property + "' expects " +
                                               std::string(to_string(prop->second.datatype)) + ", got " +
                                               to_string(literal.datatype));
  }
  bool in_domain = false;
  for (const auto& c : prop->second.domains) {
    if (individual_is_a(subject, c)) { in_domain = true; break; }
  }
  if (!in_domain) {
    throw Error(ErrorCode::DomainViolation,
                "'" + subject + "' is outside the domain of '" + property + "'");
  }
  Assertion a{subject, property, {}, std::move(literal), false};
  if (std::find(assertions_.begin(), assertions_.end(), a) != assertions_.end()) {
    throw Error(ErrorCode::DuplicateAssertion,
                subject + " " + property + " \"" + a.literal.lexical + "\" already asserted");
  }
  assertions_.push_back(std::move(a));
}

bool Ontology::has_class(const std::string& name) const { return classes_.count(name) != 0; }
bool Ontology::has_property(const std::string& name) const { return properties_.count(name) != 0; }
bool Ontology::has_individual(const std::string& name) const { return individuals_.count(name) != 0; }

const ClassDef& Ontology::class_def(const std::string& name) const {
  auto it = classes_.find(name);
  if (it == classes_.end()) throw Error(ErrorCode::UnknownClass, "unknown class '" + name + "'");
  return it->second;
}

const PropertyDef& Ontology::property_def(const std::string& name) const {
  auto it = properties_.find(name);
  if (it == properties_.end()) throw Error(ErrorCode::UnknownName, "unknown property '" + name + "'");
  return it->second;
}

const IndividualDef& Ontology::individual(const std::string& name) const {
  auto it = individuals_.find(name);
  if (it == individuals_.end()) throw Error(ErrorCode::UnknownName, "unknown individual '" + name + "'");
  return it->second;
}

bool Ontology::is_subclass_of(const std::string& cls, const std::string& ancestor) const {
  const std::string* cur = &cls;
  while (true) {
    auto it = classes_.find(*cur);
    if (it == classes_.end()) return false;
    if (*cur == ancestor) return true;
    if (!it->second.parent) return false;
    cur = &*it->second.parent;
  }
}

bool Ontology::individual_is_a(const std::string& individual, const std::string& cls) const {
  auto it = individuals_.find(individual);
  if (it == individuals_.end()) return false;
  for (const auto& c : it->second.classes) {
    if (is_subclass_of(c, cls)) return true;
  }
  return false;
}

std::vector<std::string> Ontology::individuals_of(const std::string& cls) const {
  std::vector<std::string> out;
  for (const auto& [name, def] : individuals_) {
    (void)def;
    if (individual_is_a(name, cls)) out.push_back(name);
  }
  return out;
}

std::vector<Assertion> Ontology::assertions_of(const std::string& subject) const {
  std::vector<Assertion> out;
  for (const auto& a : assertions_) {
    if (a.subject == subject) out.push_back(a);
  }
  return out;
}

std::vector<std::string> Ontology::objects_of(const std::string& subject,
                                              const std::string& property) const {
  std::vector<std::string> out;
  for (const auto& a : assertions_) {
    if (a.is_object && a.subject == subject && a.property == property) out.push_back(a.object);
  }
  return out;
}

std::optional<std::string> Ontology::object_of(const std::string& subject,
                                               const std::string& property) const {
  for (const auto& a : assertions_) {
    if (a.is_object && a.subject == subject && a.property == property) return a.object;
  }
  return std::nullopt;
}

std::optional<Literal> Ontology::literal_of(const std::string& subject,
                                            const std::string& property) const {
  for (const auto& a : assertions_) {
    if (!a.is_object && a.subject == subject && a.property == property) return a.literal;
  }
  return std::nullopt;
}

OntologyStats Ontology::stats() const {
  OntologyStats st;
  st.classes = classes_.size();
  for (const auto& [name, def] : properties_) {
    (void)name;
    if (def.kind == PropertyKind::Object) ++st.object_properties;
    else ++st.data_properties;
  }
  st.individuals = individuals_.size();
  st.assertions = assertions_.size();
  st.axioms = st.classes + st.object_properties + st.data_properties + st.individuals + st.assertions;
  return st;
}

Ontology Ontology::with_assertion_removed(const std::string& subject, const std::string& property,
                                          const std::string& object) const {
  Ontology copy = *this;
  for (auto it = copy.assertions_.begin(); it != copy.assertions_.end(); ++it) {
    if (it->is_object && it->subject == subject && it->property == property && it->object == object) {
      copy.assertions_.erase(it);
      return copy;
    }
  }
  throw Error(ErrorCode::UnknownName,
              "no assertion " + subject + " " + property + " " + object + " to remove");
}

std::string Ontology::serialize() const {
  std::vector<std::string> c_lines, p_lines, i_lines, a_lines;
  for (const auto& [name, def] : classes_) {
    c_lines.push_back("C " + name + " " + (def.parent ? *def.parent : "-"));
  }
  for (const auto& [name, def] : properties_) {
    if (def.kind == PropertyKind::Object) {
      p_lines.push_back("P O " + name + " " + join_sorted(def.domains) + " " + join_sorted(def.ranges));
    } else {
      p_lines.push_back("P D " + name + " " + join_sorted(def.domains) + " " + to_string(def.datatype));
    }
  }
  for (const auto& [name, def] : individuals_) {
    i_lines.push_back("I " + name + " " + join_sorted(def.classes) + " " + to_string(def.origin));
  }
  for (const auto& a : assertions_) {
    if (a.is_object) {
      a_lines.push_back("A " + a.subject + " " + a.property + " " + a.object);
    } else {
      a_lines.push_back("A " + a.subject + " " + a.property + " \"" + a.literal.lexical + "\"^^" +
                        to_string(a.literal.datatype));
    }
  }
  std::sort(c_lines.begin(), c_lines.end());
  std::sort(p_lines.begin(), p_lines.end());
  std::sort(i_lines.begin(), i_lines.end());
  std::sort(a_lines.begin(), a_lines.end());

  std::string out = "ONTO/1\n";
  for (const auto* bucket : {&c_lines, &p_lines, &i_lines, &a_lines}) {
    for (const auto& line : *bucket) {
      out += line;
      out += '\n';
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    auto end = line.find(' ', start);
    if (end == std::string::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

std::set<std::string> split_names(const std::string& field) {
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

struct ClassRec {
  std::string name;
  std::optional<std::string> parent;
};

[[noreturn]] void syntax_error(std::size_t line_no, const std::string& detail) {
  throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": " + detail);
}

}  // namespace

Ontology Ontology::parse(std::string_view text) {
  // Records are grouped by kind before application, so any record order
  // parses; the canonical order is what serialize() emits.
  std::vector<std::pair<std::size_t, ClassRec>> class_recs;
  std::vector<std::pair<std::size_t, std::string>> prop_lines, indiv_lines, assert_lines;

  std::size_t pos = 0, line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != "ONTO/1") syntax_error(1, "expected ONTO/1 header");
      saw_header = true;
      continue;
    }
    if (line.empty()) syntax_error(line_no, "blank line");
    switch (line[0]) {
      case 'C': {
        auto f = split_fields(line);
        if (f.size() != 3 || f[0] != "C") syntax_error(line_no, "malformed class record");
        class_recs.push_back({line_no, {f[1], f[2] == "-" ? std::nullopt : std::optional(f[2])}});
        break;
      }
      case 'P': prop_lines.push_back({line_no, line}); break;
      case 'I': indiv_lines.push_back({line_no, line}); break;
      case 'A': assert_lines.push_back({line_no, line}); break;
      default: syntax_error(line_no, "unknown record tag '" + line.substr(0, 1) + "'");
    }
  }
  if (!saw_header) throw Error(ErrorCode::SyntaxError, "empty input, expected ONTO/1 header");

  Ontology o;

  // Classes in dependency order: a class may name a parent that appears later.
  std::map<std::string, std::size_t> declared;
  for (const auto& [ln, rec] : class_recs) {
    if (declared.count(rec.name)) {
      throw Error(ErrorCode::DuplicateName, "class '" + rec.name + "' already exists");
    }
    declared[rec.name] = ln;
  }
  std::vector<std::pair<std::size_t, ClassRec>> pending = class_recs;
  while (!pending.empty()) {
    std::size_t before = pending.size();
    std::vector<std::pair<std::size_t, ClassRec>> next;
    for (auto& [ln, rec] : pending) {
      if (!rec.parent || o.has_class(*rec.parent)) {
        o.add_class(rec.name, rec.parent);
      } else if (!declared.count(*rec.parent)) {
        throw Error(ErrorCode::UnknownParent,
                    "class '" + rec.name + "' references unknown parent '" + *rec.parent + "'");
      } else {
        next.push_back({ln, std::move(rec)});
      }
    }
    if (next.size() == before) {
      throw Error(ErrorCode::CycleDetected,
                  "class hierarchy contains a cycle involving '" + next.front().second.name + "'");
    }
    pending = std::move(next);
  }

  for (const auto& [ln, line] : prop_lines) {
    auto f = split_fields(line);
    if (f.size() != 5 || f[0] != "P") syntax_error(ln, "malformed property record");
    if (f[1] == "O") {
      o.add_object_property(f[2], split_names(f[3]), split_names(f[4]));
    } else if (f[1] == "D") {
      o.add_data_property(f[2], split_names(f[3]), datatype_from_string(f[4]));
    } else {
      syntax_error(ln, "property kind must be O or D");
    }
  }

  for (const auto& [ln, line] : indiv_lines) {
    auto f = split_fields(line);
    if (f.size() != 4 || f[0] != "I") syntax_error(ln, "malformed individual record");
    o.add_individual(f[1], split_names(f[2]), origin_from_string(f[3]));
  }

  for (const auto& [ln, line] : assert_lines) {
    // A subj prop obj  |  A subj prop "lexical"^^datatype
    auto sp1 = line.find(' ');
    auto sp2 = line.find(' ', sp1 + 1);
    auto sp3 = line.find(' ', sp2 + 1);
    if (sp1 == std::string::npos || sp2 == std::string::npos || sp3 == std::string::npos) {
      syntax_error(ln, "malformed assertion record");
    }
    std::string subject = line.substr(sp1 + 1, sp2 - sp1 - 1);
    std::string property = line.substr(sp2 + 1, sp3 - sp2 - 1);
    std::string rest = line.substr(sp3 + 1);
    if (rest.empty()) syntax_error(ln, "malformed assertion record");
    if (rest[0] == '"') {
      auto close = rest.find('"', 1);
      if (close == std::string::npos) syntax_error(ln, "unterminated string literal");
      std::string lexical = rest.substr(1, close - 1);
      if (rest.compare(close + 1, 2, "^^") != 0) syntax_error(ln, "expected ^^datatype");
      std::string dt = rest.substr(close + 3);
      Datatype datatype;
      try {
        datatype = datatype_from_string(dt);
      } catch (const Error&) {
        syntax_error(ln, "unknown datatype '" + dt + "'");
      }
      check_lexical(lexical, datatype);
      o.assert_data(subject, property, Literal{std::move(lexical), datatype});
    } else {
      if (rest.find(' ') != std::string::npos) syntax_error(ln, "malformed assertion record");
      o.assert_object(subject, property, rest);
    }
  }

  return o;
}

Ontology Ontology::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure on '" + path + "'");
  return parse(buf.str());
}

void Ontology::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << serialize();
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failure on '" + path + "'");
}

}  // namespace ontoscen
