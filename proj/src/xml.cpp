#include "xcsp/xml.hpp"

#include <expat.h>

#include <memory>

#include "xcsp/error.hpp"

namespace xcsp {

const std::string* XmlNode::attribute(std::string_view key) const noexcept {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::elements() const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children)
    if (c.is_element()) out.push_back(&c);
  return out;
}

std::vector<const XmlNode*> XmlNode::elements(std::string_view child_name) const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children)
    if (c.is_element() && c.name == child_name) out.push_back(&c);
  return out;
}

std::string XmlNode::text_content() const {
  std::string out;
  for (const auto& c : children)
    if (c.is_text()) out += c.text;
  return out;
}

bool XmlNode::has_element_children() const noexcept {
  for (const auto& c : children)
    if (c.is_element()) return true;
  return false;
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  std::vector<XmlNode*> stack;
  std::vector<std::size_t> start_tag_end;
  XmlNode root;
  bool have_root = false;
  bool doctype = false;
  std::size_t doctype_offset = 0;

  std::size_t index() const { return static_cast<std::size_t>(XML_GetCurrentByteIndex(parser)); }
  std::size_t count() const { return static_cast<std::size_t>(XML_GetCurrentByteCount(parser)); }

  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* b = static_cast<Builder*>(data);
    XmlNode node;
    node.name = name;
    node.offset = b->index();
    for (std::size_t i = 0; atts[i]; i += 2) node.attributes.emplace_back(atts[i], atts[i + 1]);
    XmlNode* slot;
    if (b->stack.empty()) {
      b->root = std::move(node);
      b->have_root = true;
      slot = &b->root;
    } else {
      b->stack.back()->children.push_back(std::move(node));
      slot = &b->stack.back()->children.back();
    }
    b->stack.push_back(slot);
    b->start_tag_end.push_back(b->index() + b->count());
  }

  static void on_end(void* data, const XML_Char*) {
    auto* b = static_cast<Builder*>(data);
    // Self-closing tags report an empty end event.
    const std::size_t n = b->count();
    b->stack.back()->end = n == 0 ? b->start_tag_end.back() : b->index() + n;
    b->stack.pop_back();
    b->start_tag_end.pop_back();
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* b = static_cast<Builder*>(data);
    if (b->stack.empty()) return;
    auto& children = b->stack.back()->children;
    if (!children.empty() && children.back().is_text()) {
      children.back().text.append(s, static_cast<std::size_t>(len));
      return;
    }
    XmlNode node;
    node.kind = XmlNode::Kind::text;
    node.offset = b->index();
    node.text.assign(s, static_cast<std::size_t>(len));
    children.push_back(std::move(node));
  }

  static void on_doctype(void* data, const XML_Char*, const XML_Char*, const XML_Char*, int) {
    auto* b = static_cast<Builder*>(data);
    b->doctype = true;
    b->doctype_offset = b->index();
    XML_StopParser(b->parser, XML_FALSE);
  }
};

}  // namespace

XmlNode parse_xml(std::string_view bytes) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                                      &XML_ParserFree);
  if (!parser) throw Error("XmlError", "cannot allocate XML parser");
  Builder b;
  b.parser = parser.get();
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(b.parser, &Builder::on_text);
  XML_SetStartDoctypeDeclHandler(b.parser, &Builder::on_doctype);
  XML_SetParamEntityParsing(b.parser, XML_PARAM_ENTITY_PARSING_NEVER);

  const auto status = XML_Parse(b.parser, bytes.data(), static_cast<int>(bytes.size()), XML_TRUE);
  if (b.doctype) throw Error("XmlError", "document type declarations are not accepted", b.doctype_offset);
  if (status != XML_STATUS_OK) {
    const auto offset = static_cast<std::size_t>(XML_GetCurrentByteIndex(b.parser));
    throw Error("XmlError",
                std::string(XML_ErrorString(XML_GetErrorCode(b.parser))) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(b.parser)),
                std::min(offset, bytes.empty() ? 0 : bytes.size() - 1));
  }
  if (!b.have_root) throw Error("XmlError", "document has no root element", 0);
  return std::move(b.root);
}

std::string xml_escape(std::string_view text, bool attribute) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out += c;
    }
  }
  return out;
}

}  // namespace xcsp
