#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mobidesc/core/time.hpp"
#include "mobidesc/model/element.hpp"
#include "mobidesc/model/kinds.hpp"

namespace mobidesc {

struct ServiceIdentity {
  std::string name;
  std::string uri;

  friend bool operator==(const ServiceIdentity&, const ServiceIdentity&) = default;
};

/// WSDL-2.0-style import statement linking the functional description to one
/// of the other documents: <import namespace=".." location=".."/> with a
/// documentation child.
struct ImportLink {
  std::string namespace_uri;
  std::string location;
  std::optional<std::string> documentation;

  friend bool operator==(const ImportLink&, const ImportLink&) = default;
};

/// One description document: a tree of named placeholders under a root whose
/// name identifies the kind. Immutable by convention — updates build a
/// replacement document.
struct DescriptionDocument {
  Kind kind = Kind::Functional;
  ServiceIdentity service;
  std::optional<Instant> time_stamp; // absent on Functional (registry-resident, static)
  std::vector<ImportLink> imports;   // Functional only
  ElementNode root;                  // root.name == root_name(kind); children are the groups

  friend bool operator==(const DescriptionDocument&, const DescriptionDocument&) = default;

  const ElementNode* group(std::string_view name) const { return root.child(name); }
  ElementNode* group(std::string_view name) { return root.child(name); }
};

/// True when the group counts toward coverage: a scalar with a value, or a
/// container with at least one child. Materialized-but-empty groups do not
/// make a placeholder "present".
inline bool group_populated(const DescriptionDocument& doc, std::string_view group_name) {
  const ElementNode* g = doc.group(group_name);
  if (!g) return false;
  return g->is_scalar() ? !g->value->empty() : !g->children.empty();
}

} // namespace mobidesc
