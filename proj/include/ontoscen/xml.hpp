#pragma once

#include <cstddef>
#include <list>
#include <string>
#include <utility>
#include <vector>

namespace ontoscen {

// One XML element. Attributes are kept sorted by key; children keep their
// insertion order and stay reference-stable while siblings are appended.
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::list<XmlNode> children;

  XmlNode() = default;
  explicit XmlNode(std::string element) : name(std::move(element)) {}

  // Sets (or replaces) an attribute, keeping keys sorted. Returns *this.
  XmlNode& attr(const std::string& key, std::string value);
  // Appends a child element and returns a reference to it.
  XmlNode& child(const std::string& element);

  const std::string* find_attr(const std::string& key) const;
  XmlNode* find(const std::string& element);
  const XmlNode* find(const std::string& element) const;
  std::vector<const XmlNode*> find_all(const std::string& element) const;
  // Number of elements with this name anywhere below (and including) this node.
  std::size_t count_descendants(const std::string& element) const;
};

// XML declaration plus the serialized tree: two-space indentation, LF line
// endings, attributes in stored (key) order, childless elements self-closed.
std::string emit_document(const XmlNode& root);

// Parses the subset emit_document produces: one root element, double-quoted
// attributes, the five standard entities, comments, and whitespace between
// elements. Anything else — text content included — throws SyntaxError.
XmlNode parse_xml(std::string_view text);

}  // namespace ontoscen
