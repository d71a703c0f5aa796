#include "ontoscen/xml.hpp"

#include <algorithm>
#include <cctype>
#include <string_view>

#include "ontoscen/errors.hpp"

namespace ontoscen {

XmlNode& XmlNode::attr(const std::string& key, std::string value) {
  auto it = std::lower_bound(
      attributes.begin(), attributes.end(), key,
      [](const std::pair<std::string, std::string>& a, const std::string& k) { return a.first < k; });
  if (it != attributes.end() && it->first == key) {
    it->second = std::move(value);
  } else {
    attributes.insert(it, {key, std::move(value)});
  }
  return *this;
}

XmlNode& XmlNode::child(const std::string& element) {
  children.emplace_back(element);
  return children.back();
}

const std::string* XmlNode::find_attr(const std::string& key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

XmlNode* XmlNode::find(const std::string& element) {
  for (auto& c : children) {
    if (c.name == element) return &c;
  }
  return nullptr;
}

const XmlNode* XmlNode::find(const std::string& element) const {
  for (const auto& c : children) {
    if (c.name == element) return &c;
  }
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::find_all(const std::string& element) const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children) {
    if (c.name == element) out.push_back(&c);
  }
  return out;
}

std::size_t XmlNode::count_descendants(const std::string& element) const {
  std::size_t n = name == element ? 1 : 0;
  for (const auto& c : children) n += c.count_descendants(element);
  return n;
}

namespace {

void escape_into(const std::string& value, std::string& out) {
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

void write_node(const XmlNode& node, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += '<';
  out += node.name;
  for (const auto& [key, value] : node.attributes) {
    out += ' ';
    out += key;
    out += "=\"";
    escape_into(value, out);
    out += '"';
  }
  if (node.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& c : node.children) write_node(c, depth + 1, out);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "</";
  out += node.name;
  out += ">\n";
}

}  // namespace

std::string emit_document(const XmlNode& root) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  write_node(root, 0, out);
  return out;
}

namespace {

struct XmlScanner {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;

  [[noreturn]] void fail(const std::string& detail) const {
    throw Error(ErrorCode::SyntaxError,
                "xml: " + detail + " (line " + std::to_string(line) + ")");
  }

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  bool ahead(std::string_view token) const { return text.substr(pos, token.size()) == token; }

  char take() {
    if (done()) fail("unexpected end of input");
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }

  bool consume(std::string_view token) {
    if (!ahead(token)) return false;
    for (std::size_t i = 0; i < token.size(); ++i) take();
    return true;
  }

  void expect(std::string_view token, const char* what) {
    if (!consume(token)) fail(std::string("expected ") + what);
  }

  // whitespace only: inside tags
  void skip_blank() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }

  // whitespace and comments: between elements
  void skip_space() {
    while (!done()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        take();
      } else if (ahead("<!--")) {
        std::size_t end = text.find("-->", pos + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        while (pos < end + 3) take();
      } else {
        return;
      }
    }
  }

  std::string name() {
    std::size_t start = pos;
    while (!done()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
          c == ':') {
        take();
      } else {
        break;
      }
    }
    if (pos == start) fail("expected a name");
    return std::string(text.substr(start, pos - start));
  }

  std::string attribute_value() {
    expect("\"", "a double-quoted value");
    std::string out;
    while (true) {
      char c = take();
      if (c == '"') return out;
      if (c == '<') fail("'<' inside an attribute value");
      if (c != '&') {
        out += c;
        continue;
      }
      if (consume("amp;")) out += '&';
      else if (consume("lt;")) out += '<';
      else if (consume("gt;")) out += '>';
      else if (consume("quot;")) out += '"';
      else if (consume("apos;")) out += '\'';
      else fail("unknown entity reference");
    }
  }

  XmlNode element() {
    expect("<", "'<'");
    XmlNode node(name());
    while (true) {
      skip_blank();
      if (consume("/>")) return node;
      if (consume(">")) break;
      std::string key = name();
      if (node.find_attr(key)) fail("duplicate attribute '" + key + "'");
      skip_blank();
      expect("=", "'='");
      skip_blank();
      node.attr(key, attribute_value());
    }
    while (true) {
      skip_space();
      if (done()) fail("unterminated element '" + node.name + "'");
      if (consume("</")) {
        std::string close = name();
        if (close != node.name) {
          fail("closing tag '" + close + "' does not match '" + node.name + "'");
        }
        skip_blank();
        expect(">", "'>'");
        return node;
      }
      if (peek() != '<') fail("unexpected text content");
      node.children.push_back(element());
    }
  }
};

}  // namespace

XmlNode parse_xml(std::string_view text) {
  XmlScanner s{text};
  s.skip_space();
  if (s.consume("<?xml")) {
    std::size_t end = text.find("?>", s.pos);
    if (end == std::string_view::npos) s.fail("unterminated declaration");
    while (s.pos < end + 2) s.take();
  }
  s.skip_space();
  XmlNode root = s.element();
  s.skip_space();
  if (!s.done()) s.fail("content after the document element");
  return root;
}

}  // namespace ontoscen
