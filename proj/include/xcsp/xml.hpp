#pragma once

// Minimal XML document tree over expat. Keeps byte offsets so diagnostics
// can point into the input and so opaque fragments can be sliced out
// verbatim. Document type declarations are refused outright, which also
// rules out entity expansion.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xcsp {

struct XmlNode {
  enum class Kind { element, text };

  Kind kind = Kind::element;
  std::string name;  // element name
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;          // text node content, entities decoded
  std::size_t offset = 0;    // first byte of the start tag or of the text
  std::size_t end = 0;       // one past the last byte of the element
  std::vector<XmlNode> children;

  bool is_element() const noexcept { return kind == Kind::element; }
  bool is_text() const noexcept { return kind == Kind::text; }
  const std::string* attribute(std::string_view key) const noexcept;
  /// Element children only.
  std::vector<const XmlNode*> elements() const;
  /// Element children with the given name.
  std::vector<const XmlNode*> elements(std::string_view child_name) const;
  /// Concatenated text children, ignoring nested elements.
  std::string text_content() const;
  bool has_element_children() const noexcept;
};

/// Parses a whole document and returns its root element. Throws
/// Error("XmlError") with the failing byte offset.
XmlNode parse_xml(std::string_view bytes);

/// Escapes &, <, > and, for attribute values, double quotes.
std::string xml_escape(std::string_view text, bool attribute = false);

}  // namespace xcsp
