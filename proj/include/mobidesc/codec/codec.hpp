#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mobidesc/codec/xml.hpp"
#include "mobidesc/model/build.hpp"
#include "mobidesc/model/document.hpp"
#include "mobidesc/model/schema.hpp"
#include "mobidesc/model/validate.hpp"

namespace mobidesc {

/// Serialized document: UTF-8 XML 1.0 bytes, single root element whose name
/// identifies the kind.
struct WireDocument {
  std::string bytes;

  friend bool operator==(const WireDocument&, const WireDocument&) = default;
};

namespace codec_detail {

// Canonical form: 2-space indentation, LF line endings, fixed attribute
// order (service, serviceUri, timeStamp | isDynamic, unit, documentation),
// child elements in schema order, isDynamic emitted only when true.
inline void emit_attr(std::string& out, std::string_view name, std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  xml_detail::escape_attr(out, value);
  out += '"';
}

inline void emit_element(std::string& out, const ElementNode& node, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += '<';
  out += node.name;
  if (node.is_dynamic) emit_attr(out, "isDynamic", "true");
  if (node.unit) emit_attr(out, "unit", *node.unit);
  if (node.documentation) emit_attr(out, "documentation", *node.documentation);
  if (node.is_scalar()) {
    out += '>';
    xml_detail::escape_text(out, *node.value);
    out += "</";
    out += node.name;
    out += ">\n";
    return;
  }
  if (node.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& c : node.children) emit_element(out, c, depth + 1);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "</";
  out += node.name;
  out += ">\n";
}

inline void emit_import(std::string& out, const ImportLink& link) {
  out += "  <import";
  emit_attr(out, "namespace", link.namespace_uri);
  emit_attr(out, "location", link.location);
  out += ">\n";
  if (link.documentation && !link.documentation->empty()) {
    out += "    <documentation>";
    xml_detail::escape_text(out, *link.documentation);
    out += "</documentation>\n";
  } else {
    out += "    <documentation/>\n";
  }
  out += "  </import>\n";
}

} // namespace codec_detail

/// Canonical serialization. The document must be valid; output bytes are a
/// pure function of the document (child order is re-derived from the schema,
/// so serialize . parse . serialize is byte-identical).
inline WireDocument serialize(const DescriptionDocument& doc) {
  const ValidationReport report = validate(doc);
  if (!report.valid()) {
    const Violation& first = report.violations.front();
    throw InvalidDocument("cannot serialize invalid document: " +
                          std::string(to_string(first.code)) +
                          (first.path.empty() ? "" : " at " + first.path) + ": " + first.detail);
  }
  const KindSchema& schema = kind_schema(doc.kind);

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += '<';
  out += root_name(doc.kind);
  codec_detail::emit_attr(out, "service", doc.service.name);
  codec_detail::emit_attr(out, "serviceUri", doc.service.uri);
  if (doc.time_stamp) codec_detail::emit_attr(out, "timeStamp", doc.time_stamp->to_iso8601());
  if (doc.root.documentation) {
    codec_detail::emit_attr(out, "documentation", *doc.root.documentation);
  }
  const bool empty_body = doc.imports.empty() && doc.root.children.empty();
  if (empty_body) {
    out += "/>\n";
    return WireDocument{std::move(out)};
  }
  out += ">\n";
  for (const auto& link : doc.imports) codec_detail::emit_import(out, link);

  std::vector<ElementNode> groups = doc.root.children;
  build_detail::sort_schema_order(groups, schema.groups);
  for (const auto& g : groups) codec_detail::emit_element(out, g, 1);

  out += "</";
  out += root_name(doc.kind);
  out += ">\n";
  return WireDocument{std::move(out)};
}

namespace codec_detail {

inline bool known_node_attr(std::string_view name) {
  return name == "isDynamic" || name == "unit" || name == "documentation";
}

inline void read_node_attrs(const XmlElement& el, ElementNode& node) {
  for (const auto& a : el.attributes) {
    if (a.name == "isDynamic") {
      if (a.value == "true") node.is_dynamic = true;
      else if (a.value == "false") node.is_dynamic = false;
      else throw SchemaViolation("isDynamic must be true or false on '" + el.name + "'");
    } else if (a.name == "unit") {
      node.unit = a.value;
    } else if (a.name == "documentation") {
      node.documentation = a.value;
    } else {
      throw SchemaViolation("unknown attribute '" + a.name + "' on '" + el.name + "'");
    }
  }
}

// Element under an extensible group: form follows content.
inline ElementNode read_free_element(const XmlElement& el) {
  ElementNode node;
  node.name = el.name;
  read_node_attrs(el, node);
  if (!el.children.empty()) {
    if (!el.text.empty()) {
      throw SchemaViolation("mixed content in '" + el.name + "'");
    }
    for (const auto& c : el.children) node.children.push_back(read_free_element(c));
  } else if (!el.self_closed) {
    node.value = el.text;
  }
  return node;
}

inline ElementNode read_element(const XmlElement& el, const NodeSpec& spec);

inline void read_children(const XmlElement& el, const NodeSpec& spec, ElementNode& node) {
  if (!el.text.empty()) {
    throw SchemaViolation("'" + el.name + "' must contain elements, not text");
  }
  for (const auto& c : el.children) {
    if (const NodeSpec* cspec = find_spec(spec.children, c.name)) {
      node.children.push_back(read_element(c, *cspec));
    } else if (spec.extensible) {
      node.children.push_back(read_free_element(c));
    } else {
      throw SchemaViolation("unknown element '" + c.name + "' under '" + el.name + "'");
    }
  }
}

inline ElementNode read_element(const XmlElement& el, const NodeSpec& spec) {
  ElementNode node;
  node.name = el.name;
  read_node_attrs(el, node);
  if (spec.is_container) {
    read_children(el, spec, node);
  } else {
    if (!el.children.empty()) {
      throw SchemaViolation("'" + el.name + "' must be a scalar, found child elements");
    }
    node.value = el.self_closed ? std::string() : el.text;
  }
  return node;
}

inline ImportLink read_import(const XmlElement& el) {
  ImportLink link;
  const XmlAttr* ns = el.attr("namespace");
  const XmlAttr* loc = el.attr("location");
  if (!ns || !loc) throw SchemaViolation("import requires namespace and location attributes");
  for (const auto& a : el.attributes) {
    if (a.name != "namespace" && a.name != "location") {
      throw SchemaViolation("unknown attribute '" + a.name + "' on import");
    }
  }
  link.namespace_uri = ns->value;
  link.location = loc->value;
  for (const auto& c : el.children) {
    if (c.name != "documentation") {
      throw SchemaViolation("import may contain only a documentation child");
    }
    if (!c.text.empty()) link.documentation = c.text;
  }
  if (!el.children.empty() && !el.text.empty()) {
    throw SchemaViolation("mixed content in import");
  }
  return link;
}

} // namespace codec_detail

/// Parses wire bytes into a document. Structure (names, attributes, scalar
/// vs. container form) is checked here; value ranges are validate()'s job.
/// Unknown elements under extensible groups are preserved verbatim.
inline DescriptionDocument parse(const WireDocument& wire) {
  const XmlElement root = xml_parse(wire.bytes);
  const auto kind = kind_from_root_name(root.name);
  if (!kind) throw SchemaViolation("unknown root element '" + root.name + "'");
  const KindSchema& schema = kind_schema(*kind);

  DescriptionDocument doc;
  doc.kind = *kind;
  doc.root = container(root.name);

  const XmlAttr* service = root.attr("service");
  const XmlAttr* service_uri = root.attr("serviceUri");
  if (!service || !service_uri) {
    throw SchemaViolation("root element requires service and serviceUri attributes");
  }
  doc.service = ServiceIdentity{service->value, service_uri->value};
  for (const auto& a : root.attributes) {
    if (a.name == "service" || a.name == "serviceUri") continue;
    if (a.name == "documentation") {
      doc.root.documentation = a.value;
      continue;
    }
    if (a.name == "timeStamp") {
      if (!schema.has_timestamp) {
        throw SchemaViolation("functional descriptions carry no timeStamp");
      }
      doc.time_stamp = Instant::parse_iso8601(a.value); // throws BadTimestamp
      continue;
    }
    throw SchemaViolation("unknown attribute '" + a.name + "' on document root");
  }
  if (schema.has_timestamp && !doc.time_stamp) {
    throw SchemaViolation(std::string(root_name(*kind)) + " requires a timeStamp attribute");
  }
  if (!root.text.empty() && !root.children.empty()) {
    throw SchemaViolation("mixed content in document root");
  }
  if (root.children.empty() && !root.text.empty()) {
    throw SchemaViolation("document root must contain elements, not text");
  }

  for (const auto& c : root.children) {
    if (c.name == "import") {
      if (!schema.allows_imports) {
        throw SchemaViolation("imports are allowed only on functional documents");
      }
      doc.imports.push_back(codec_detail::read_import(c));
      continue;
    }
    if (const NodeSpec* gspec = find_spec(schema.groups, c.name)) {
      doc.root.children.push_back(codec_detail::read_element(c, *gspec));
    } else {
      throw SchemaViolation("unknown element '" + c.name + "' under document root");
    }
  }
  return doc;
}

inline DescriptionDocument parse(std::string_view bytes) {
  return parse(WireDocument{std::string(bytes)});
}

/// Imports of a serialized functional description, in document order.
/// Anything that parses as a different kind raises NotFunctional.
inline std::vector<ImportLink> extract_imports(const WireDocument& wire) {
  const DescriptionDocument doc = parse(wire);
  if (doc.kind != Kind::Functional) {
    throw NotFunctional("expected a functional description, got " +
                        std::string(root_name(doc.kind)));
  }
  return doc.imports;
}

} // namespace mobidesc
