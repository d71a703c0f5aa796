#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontoscen/errors.hpp"

namespace ontoscen {

// Primitive datatypes for data properties and literals.
enum class Datatype { Double, Integer, Boolean, String, Token };

Datatype datatype_from_string(std::string_view text);
const char* to_string(Datatype datatype);

// Provenance of an individual.
enum class Origin { Constant, Default, Scenario };

Origin origin_from_string(std::string_view text);
const char* to_string(Origin origin);

enum class PropertyKind { Object, Data };

struct ClassDef {
  std::string name;
  std::optional<std::string> parent;
  std::string group;  // informational tag; not serialized
};

struct PropertyDef {
  std::string name;
  PropertyKind kind = PropertyKind::Object;
  std::set<std::string> domains;           // classes
  std::set<std::string> ranges;            // classes (object properties only)
  Datatype datatype = Datatype::String;    // data properties only
};

struct IndividualDef {
  std::string name;
  std::set<std::string> classes;  // direct classes, non-empty
  Origin origin = Origin::Scenario;
};

// A typed literal value with its canonical lexical form.
struct Literal {
  std::string lexical;
  Datatype datatype = Datatype::String;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.datatype == b.datatype && a.lexical == b.lexical;
  }
  friend auto operator<=>(const Literal& a, const Literal& b) = default;
};

Literal make_literal(double value);
Literal make_literal(std::int64_t value);
Literal make_literal(bool value);
Literal make_string_literal(std::string_view value);   // datatype string
Literal make_token_literal(std::string_view value);    // datatype token

struct Assertion {
  std::string subject;
  std::string property;
  // Exactly one of the two is used, decided by the property kind.
  std::string object;           // object properties: individual name
  Literal literal;              // data properties
  bool is_object = true;

  friend bool operator==(const Assertion& a, const Assertion& b) = default;
};

struct OntologyStats {
  std::size_t classes = 0;
  std::size_t object_properties = 0;
  std::size_t data_properties = 0;
  std::size_t individuals = 0;
  std::size_t assertions = 0;
  std::size_t axioms = 0;  // classes + properties + individuals + assertions
};

// An ontology: class taxonomy, property schema, individuals, assertions.
// All mutating operations are monotonic (they only add) except the
// explicitly named removal helpers used for validation experiments.
class Ontology {
public:
  static bool valid_name(std::string_view name);

  // --- schema -------------------------------------------------------------
  void add_class(std::string name, std::optional<std::string> parent,
                 std::string group = "");
  void add_object_property(std::string name, std::set<std::string> domains,
                           std::set<std::string> ranges);
  void add_data_property(std::string name, std::set<std::string> domains,
                         Datatype datatype);

  // --- individuals and assertions ------------------------------------------
  void add_individual(std::string name, std::set<std::string> classes,
                      Origin origin);
  void assert_object(const std::string& subject, const std::string& property,
                     const std::string& object);
  void assert_data(const std::string& subject, const std::string& property,
                   Literal literal);

  // --- queries --------------------------------------------------------------
  bool has_class(const std::string& name) const;
  bool has_property(const std::string& name) const;
  bool has_individual(const std::string& name) const;
  const ClassDef& class_def(const std::string& name) const;
  const PropertyDef& property_def(const std::string& name) const;
  const IndividualDef& individual(const std::string& name) const;

  // True if `cls` equals `ancestor` or is a (transitive) subclass of it.
  bool is_subclass_of(const std::string& cls, const std::string& ancestor) const;
  // True if `individual` belongs to `cls` directly or via a subclass.
  bool individual_is_a(const std::string& individual, const std::string& cls) const;

  // Individuals of `cls` (including subclasses), name-sorted.
  std::vector<std::string> individuals_of(const std::string& cls) const;

  // Assertions with the given subject, in insertion order.
  std::vector<Assertion> assertions_of(const std::string& subject) const;
  // Object assertions (subject, property) -> objects, in insertion order.
  std::vector<std::string> objects_of(const std::string& subject,
                                      const std::string& property) const;
  // First object for (subject, property), if any.
  std::optional<std::string> object_of(const std::string& subject,
                                       const std::string& property) const;
  // First literal for (subject, property), if any.
  std::optional<Literal> literal_of(const std::string& subject,
                                    const std::string& property) const;

  const std::map<std::string, ClassDef>& classes() const { return classes_; }
  const std::map<std::string, PropertyDef>& properties() const { return properties_; }
  const std::map<std::string, IndividualDef>& individuals() const { return individuals_; }
  const std::vector<Assertion>& assertions() const { return assertions_; }

  OntologyStats stats() const;

  // --- removal helpers (validation experiments only) ------------------------
  // Copy of this ontology without the first assertion matching the triple.
  Ontology with_assertion_removed(const std::string& subject,
                                  const std::string& property,
                                  const std::string& object) const;

  // --- serialization ---------------------------------------------------------
  // Canonical text form: stable, diff-friendly, byte-identical round trip.
  std::string serialize() const;
  static Ontology parse(std::string_view text);

  static Ontology load(const std::string& path);
  void save(const std::string& path) const;

private:
  void check_classes_exist(const std::set<std::string>& names,
                           const std::string& context) const;

  std::map<std::string, ClassDef> classes_;
  std::map<std::string, PropertyDef> properties_;
  std::map<std::string, IndividualDef> individuals_;
  std::vector<Assertion> assertions_;
};

// Canonical lexical forms used in literals and serialized files.
std::string canonical_double(double value);
std::string canonical_integer(std::int64_t value);

}  // namespace ontoscen
