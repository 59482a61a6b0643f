#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobidesc/model/document.hpp"
#include "mobidesc/model/schema.hpp"
#include "mobidesc/model/validate.hpp"

namespace mobidesc {

namespace build_detail {

// Stable sort of sibling elements into schema order; unknown names keep their
// relative order after the known ones. Recurses through known containers.
inline void sort_schema_order(std::vector<ElementNode>& children,
                              const std::vector<NodeSpec>& specs) {
  std::stable_sort(children.begin(), children.end(),
                   [&](const ElementNode& a, const ElementNode& b) {
                     return schema_position(specs, a.name) < schema_position(specs, b.name);
                   });
  for (auto& c : children) {
    if (const NodeSpec* spec = find_spec(specs, c.name); spec && spec->is_container) {
      sort_schema_order(c.children, spec->children);
    }
  }
}

inline void stamp_subtree(ElementNode& node, bool flag) {
  node.is_dynamic = flag;
  for (auto& c : node.children) stamp_subtree(c, flag);
}

// Applies schema defaults: isDynamic and unit for known nodes; for split
// kinds the whole group subtree is stamped with the group's partition flag.
inline void apply_schema_flags(ElementNode& node, const NodeSpec& spec,
                               const bool* forced_flag) {
  node.is_dynamic = forced_flag ? *forced_flag : spec.dynamic;
  if (!spec.is_container) {
    if (!spec.unit.empty()) node.unit = std::string(spec.unit);
    return;
  }
  for (auto& c : node.children) {
    if (const NodeSpec* cspec = find_spec(spec.children, c.name)) {
      apply_schema_flags(c, *cspec, forced_flag);
    } else if (forced_flag) {
      stamp_subtree(c, *forced_flag);
    }
  }
}

} // namespace build_detail

/// Normalizes a document in place: schema-ordered children, isDynamic and
/// unit defaults from the schema, and for split kinds the per-group partition
/// flag stamped through each group's subtree. Unknown (extensible) entries
/// keep their own flags except under a partitioned group.
inline void normalize_document(DescriptionDocument& doc) {
  const KindSchema& schema = kind_schema(doc.kind);
  doc.root.name = std::string(root_name(doc.kind));
  doc.root.value.reset();
  for (auto& g : doc.root.children) {
    const NodeSpec* gspec = find_spec(schema.groups, g.name);
    if (!gspec) continue;
    if (schema.enforce_partition) {
      const bool flag = gspec->dynamic;
      build_detail::apply_schema_flags(g, *gspec, &flag);
    } else {
      build_detail::apply_schema_flags(g, *gspec, nullptr);
    }
  }
  build_detail::sort_schema_order(doc.root.children, schema.groups);
}

/// Builds a document of the given kind from top-level placeholder entries.
/// Non-repeatable container groups of the schema are materialized even when
/// no entry supplies them, so every skeleton placeholder exists (possibly
/// empty). The result is normalized and validated; violations surface as
/// SchemaViolation or InvalidValue.
inline DescriptionDocument build_document(Kind kind, ServiceIdentity service,
                                          std::vector<ElementNode> entries,
                                          std::optional<Instant> build_instant = std::nullopt,
                                          std::vector<ImportLink> imports = {}) {
  const KindSchema& schema = kind_schema(kind);
  if (schema.has_timestamp && !build_instant) {
    throw SchemaViolation(std::string(root_name(kind)) + " requires a build instant");
  }
  DescriptionDocument doc;
  doc.kind = kind;
  doc.service = std::move(service);
  if (schema.has_timestamp) doc.time_stamp = build_instant;
  doc.imports = std::move(imports);
  doc.root = container(std::string(root_name(kind)), std::move(entries));
  if (schema.materialize_groups) {
    for (const auto& gspec : schema.groups) {
      if (!gspec.is_container || gspec.repeatable) continue;
      if (!doc.root.child(gspec.name)) {
        doc.root.children.push_back(container(std::string(gspec.name)));
      }
    }
  }
  normalize_document(doc);

  const ValidationReport report = validate(doc);
  if (!report.valid()) {
    const Violation& first = report.violations.front();
    const std::string message = std::string(to_string(first.code)) +
                                (first.path.empty() ? "" : " at " + first.path) + ": " +
                                first.detail;
    if (first.code == ViolationCode::InvalidValue) throw InvalidValue(message);
    throw SchemaViolation(message);
  }
  return doc;
}

/// Convenience for the registry-resident functional document.
inline DescriptionDocument build_functional(ServiceIdentity service,
                                            std::vector<ImportLink> imports,
                                            std::vector<ElementNode> entries) {
  return build_document(Kind::Functional, std::move(service), std::move(entries), std::nullopt,
                        std::move(imports));
}

/// Extracts one half of a split-kind document: the groups whose schema
/// partition matches `dynamic_half`. Group set only; service identity and
/// timeStamp are carried over.
inline DescriptionDocument split_half(const DescriptionDocument& doc, bool dynamic_half) {
  if (!is_split_kind(doc.kind)) {
    throw KindMismatch(std::string(root_name(doc.kind)) + " is not a split kind");
  }
  DescriptionDocument half;
  half.kind = doc.kind;
  half.service = doc.service;
  half.time_stamp = doc.time_stamp;
  half.root = container(std::string(root_name(doc.kind)));
  for (const auto& g : doc.root.children) {
    if (group_is_dynamic(doc.kind, g.name) == dynamic_half) half.root.children.push_back(g);
  }
  return half;
}

inline DescriptionDocument static_half(const DescriptionDocument& doc) {
  return split_half(doc, false);
}

inline DescriptionDocument dynamic_half(const DescriptionDocument& doc) {
  return split_half(doc, true);
}

} // namespace mobidesc
