#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mobidesc/model/document.hpp"
#include "mobidesc/model/schema.hpp"

namespace mobidesc {

enum class ViolationCode {
  BadRootName,
  EmptyName,
  UnknownElement,
  DuplicateElement,
  WrongForm,         // scalar where schema wants a container, or vice versa
  InvalidValue,
  ServiceIdentityMissing,
  TimestampMissing,
  TimestampForbidden,
  ImportsForbidden,
  BadImport,
  MissingComponent,  // functional What/How/Where incomplete
  DanglingBinding,
  PartitionMismatch,
  DuplicateConsumer,
};

constexpr std::string_view to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::BadRootName: return "BadRootName";
    case ViolationCode::EmptyName: return "EmptyName";
    case ViolationCode::UnknownElement: return "UnknownElement";
    case ViolationCode::DuplicateElement: return "DuplicateElement";
    case ViolationCode::WrongForm: return "WrongForm";
    case ViolationCode::InvalidValue: return "InvalidValue";
    case ViolationCode::ServiceIdentityMissing: return "ServiceIdentityMissing";
    case ViolationCode::TimestampMissing: return "TimestampMissing";
    case ViolationCode::TimestampForbidden: return "TimestampForbidden";
    case ViolationCode::ImportsForbidden: return "ImportsForbidden";
    case ViolationCode::BadImport: return "BadImport";
    case ViolationCode::MissingComponent: return "MissingComponent";
    case ViolationCode::DanglingBinding: return "DanglingBinding";
    case ViolationCode::PartitionMismatch: return "PartitionMismatch";
    case ViolationCode::DuplicateConsumer: return "DuplicateConsumer";
  }
  return ""; // unreachable
}

struct Violation {
  std::string path; // element path relative to the root; "" = document level
  ViolationCode code;
  std::string detail;
};

/// Violations are data, not errors: a valid document yields an empty report.
struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }

  bool has(ViolationCode code) const {
    for (const auto& v : violations) {
      if (v.code == code) return true;
    }
    return false;
  }
};

namespace validate_detail {

struct Walker {
  ValidationReport& report;

  void add(std::string path, ViolationCode code, std::string detail) {
    report.violations.push_back({std::move(path), code, std::move(detail)});
  }

  static std::string join(const std::string& prefix, const ElementNode& node, std::size_t dup_index,
                          bool duplicated) {
    std::string seg = node.name;
    if (duplicated) seg += "[" + std::to_string(dup_index) + "]";
    return prefix.empty() ? seg : prefix + "/" + seg;
  }

  // Free subtree under an extensible group: no vocabulary, only structural
  // checks plus (optionally) a required isDynamic flag value.
  void walk_free(const ElementNode& node, const std::string& path, const bool* required_flag) {
    if (node.name.empty()) add(path, ViolationCode::EmptyName, "element with empty name");
    if (required_flag && node.is_dynamic != *required_flag) {
      add(path, ViolationCode::PartitionMismatch,
          std::string("entry in ") + (*required_flag ? "dynamic" : "static") +
              " half must have isDynamic=" + (*required_flag ? "true" : "false"));
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const auto& c = node.children[i];
      walk_free(c, child_path(node, path, i), required_flag);
    }
  }

  static std::string child_path(const ElementNode& parent, const std::string& path,
                                std::size_t index) {
    const auto& c = parent.children[index];
    std::size_t total = 0;
    std::size_t before = 0;
    for (std::size_t j = 0; j < parent.children.size(); ++j) {
      if (parent.children[j].name != c.name) continue;
      ++total;
      if (j < index) ++before;
    }
    return join(path, c, before, total > 1);
  }

  void walk(const ElementNode& node, const NodeSpec& spec, const std::string& path,
            const bool* required_flag) {
    if (node.name.empty()) add(path, ViolationCode::EmptyName, "element with empty name");
    if (required_flag && node.is_dynamic != *required_flag) {
      add(path, ViolationCode::PartitionMismatch,
          std::string("entry in ") + (*required_flag ? "dynamic" : "static") +
              " half must have isDynamic=" + (*required_flag ? "true" : "false"));
    }
    if (spec.is_container) {
      if (node.is_scalar()) {
        add(path, ViolationCode::WrongForm, "'" + node.name + "' must be a container");
        return;
      }
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        const auto& c = node.children[i];
        const std::string cpath = child_path(node, path, i);
        const NodeSpec* cspec = find_spec(spec.children, c.name);
        if (!cspec) {
          if (spec.extensible) {
            walk_free(c, cpath, required_flag);
          } else {
            add(cpath, ViolationCode::UnknownElement,
                "'" + c.name + "' is not in the schema of '" + node.name + "'");
          }
          continue;
        }
        if (!cspec->repeatable) {
          std::size_t occurrences = 0;
          for (const auto& sib : node.children) {
            if (sib.name == c.name) ++occurrences;
          }
          if (occurrences > 1 && &c != node.child(c.name)) {
            add(cpath, ViolationCode::DuplicateElement,
                "'" + c.name + "' may occur only once under '" + node.name + "'");
            continue;
          }
        }
        walk(c, *cspec, cpath, required_flag);
      }
    } else {
      if (node.is_container()) {
        add(path, ViolationCode::WrongForm, "'" + node.name + "' must be a scalar");
        return;
      }
      if (auto err = check_value(spec.value, *node.value)) {
        add(path, ViolationCode::InvalidValue, *err);
      }
      if (!spec.unit.empty() && (!node.unit || *node.unit != spec.unit)) {
        add(path, ViolationCode::InvalidValue,
            "'" + node.name + "' requires unit '" + std::string(spec.unit) + "'");
      }
    }
  }
};

inline void check_functional_components(const DescriptionDocument& doc, ValidationReport& report) {
  validate_detail::Walker w{report};
  // What: at least one interface. How: at least one binding, each referencing
  // an existing interface. Where: a service group carrying an endpoint.
  std::unordered_set<std::string> interface_names;
  bool has_interface = false;
  bool has_binding = false;
  for (const auto& c : doc.root.children) {
    if (c.name == "interface") {
      has_interface = true;
      if (const ElementNode* n = c.child("name"); n && n->is_scalar()) {
        interface_names.insert(*n->value);
      }
    }
    if (c.name == "binding") has_binding = true;
  }
  if (!has_interface) {
    w.add("", ViolationCode::MissingComponent, "functional description lacks an interface (What)");
  }
  if (!has_binding) {
    w.add("", ViolationCode::MissingComponent, "functional description lacks a binding (How)");
  }
  const ElementNode* service = doc.root.child("service");
  const ElementNode* endpoint = service ? service->child("endpoint") : nullptr;
  if (!endpoint || !endpoint->is_scalar() || endpoint->value->empty()) {
    w.add("service", ViolationCode::MissingComponent,
          "functional description lacks a service endpoint (Where)");
  }
  std::size_t binding_index = 0;
  std::size_t binding_total = 0;
  for (const auto& c : doc.root.children) {
    if (c.name == "binding") ++binding_total;
  }
  for (const auto& c : doc.root.children) {
    if (c.name != "binding") continue;
    std::string path = "binding";
    if (binding_total > 1) path += "[" + std::to_string(binding_index) + "]";
    ++binding_index;
    const ElementNode* ref = c.child("interfaceRef");
    if (!ref || !ref->is_scalar() || !interface_names.count(*ref->value)) {
      w.add(path, ViolationCode::DanglingBinding,
            "binding references missing interface '" +
                (ref && ref->is_scalar() ? *ref->value : std::string("<none>")) + "'");
    }
  }
}

inline void check_consumer_uniqueness(const DescriptionDocument& doc, ValidationReport& report) {
  validate_detail::Walker w{report};
  std::unordered_set<std::string> seen;
  std::size_t index = 0;
  for (const auto& c : doc.root.children) {
    if (c.name != "consumer") continue;
    std::string path = "consumer[" + std::to_string(index) + "]";
    ++index;
    const ElementNode* id = c.child("identity");
    if (id && id->is_scalar() && !seen.insert(*id->value).second) {
      w.add(path, ViolationCode::DuplicateConsumer,
            "duplicate consumer identity '" + *id->value + "'");
    }
  }
}

} // namespace validate_detail

/// Pure structural and value validation against the kind's schema. Lists
/// every violation with an element path; an empty report means valid.
inline ValidationReport validate(const DescriptionDocument& doc) {
  ValidationReport report;
  validate_detail::Walker w{report};
  const KindSchema& schema = kind_schema(doc.kind);

  if (doc.root.name != root_name(doc.kind)) {
    w.add("", ViolationCode::BadRootName,
          "root element '" + doc.root.name + "' does not match kind '" +
              std::string(root_name(doc.kind)) + "'");
  }
  if (doc.service.name.empty() || doc.service.uri.empty()) {
    w.add("", ViolationCode::ServiceIdentityMissing, "service name and URI must be non-empty");
  }
  if (schema.has_timestamp && !doc.time_stamp) {
    w.add("", ViolationCode::TimestampMissing, "document kind requires a timeStamp");
  }
  if (!schema.has_timestamp && doc.time_stamp) {
    w.add("", ViolationCode::TimestampForbidden, "functional descriptions carry no timeStamp");
  }
  if (!schema.allows_imports && !doc.imports.empty()) {
    w.add("", ViolationCode::ImportsForbidden, "imports are allowed only on functional documents");
  }
  for (std::size_t i = 0; i < doc.imports.size(); ++i) {
    const auto& link = doc.imports[i];
    if (!looks_like_uri(link.namespace_uri) || !looks_like_uri(link.location)) {
      w.add("import[" + std::to_string(i) + "]", ViolationCode::BadImport,
            "import namespace and location must be URIs");
    }
  }

  if (doc.root.is_scalar()) {
    w.add("", ViolationCode::WrongForm, "document root must be a container");
    return report;
  }

  for (std::size_t i = 0; i < doc.root.children.size(); ++i) {
    const auto& g = doc.root.children[i];
    const std::string gpath = validate_detail::Walker::child_path(doc.root, "", i);
    const NodeSpec* gspec = find_spec(schema.groups, g.name);
    if (!gspec) {
      w.add(gpath, ViolationCode::UnknownElement,
            "'" + g.name + "' is not a placeholder of " + std::string(root_name(doc.kind)));
      continue;
    }
    if (!gspec->repeatable) {
      std::size_t occurrences = 0;
      for (const auto& sib : doc.root.children) {
        if (sib.name == g.name) ++occurrences;
      }
      if (occurrences > 1 && &g != doc.root.child(g.name)) {
        w.add(gpath, ViolationCode::DuplicateElement, "'" + g.name + "' may occur only once");
        continue;
      }
    }
    if (schema.enforce_partition) {
      const bool expected = gspec->dynamic;
      w.walk(g, *gspec, gpath, &expected);
    } else {
      w.walk(g, *gspec, gpath, nullptr);
    }
  }

  if (doc.kind == Kind::Functional) validate_detail::check_functional_components(doc, report);
  if (doc.kind == Kind::ConsumerBase) validate_detail::check_consumer_uniqueness(doc, report);
  return report;
}

} // namespace mobidesc
