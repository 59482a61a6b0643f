#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mobidesc/core/errors.hpp"

namespace mobidesc {

/// One named placeholder in a description tree. A node is either a scalar
/// (value set, no children) or a container (children, value unset); the
/// variant is by construction, never both.
struct ElementNode {
  std::string name;
  std::optional<std::string> value;
  std::vector<ElementNode> children;
  bool is_dynamic = false;
  std::optional<std::string> unit;
  std::optional<std::string> documentation;

  bool is_scalar() const { return value.has_value(); }
  bool is_container() const { return !value.has_value(); }

  friend bool operator==(const ElementNode&, const ElementNode&) = default;

  const ElementNode* child(std::string_view child_name) const {
    for (const auto& c : children) {
      if (c.name == child_name) return &c;
    }
    return nullptr;
  }

  ElementNode* child(std::string_view child_name) {
    for (auto& c : children) {
      if (c.name == child_name) return &c;
    }
    return nullptr;
  }
};

inline ElementNode scalar(std::string name, std::string value) {
  ElementNode n;
  n.name = std::move(name);
  n.value = std::move(value);
  return n;
}

inline ElementNode scalar(std::string name, std::string value, std::string unit) {
  ElementNode n = scalar(std::move(name), std::move(value));
  n.unit = std::move(unit);
  return n;
}

inline ElementNode container(std::string name, std::vector<ElementNode> children = {}) {
  ElementNode n;
  n.name = std::move(name);
  n.children = std::move(children);
  return n;
}

namespace detail {

// One path segment: "name" or "name[k]" with k a 0-based index among
// same-named siblings.
struct PathSegment {
  std::string_view name;
  std::size_t index = 0;
};

inline std::optional<PathSegment> parse_segment(std::string_view seg) {
  if (seg.empty()) return std::nullopt;
  auto open = seg.find('[');
  if (open == std::string_view::npos) return PathSegment{seg, 0};
  if (seg.back() != ']' || open == 0 || open + 2 > seg.size() - 1) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t i = open + 1; i + 1 < seg.size(); ++i) {
    const char c = seg[i];
    if (c < '0' || c > '9') return std::nullopt;
    idx = idx * 10 + static_cast<std::size_t>(c - '0');
  }
  return PathSegment{seg.substr(0, open), idx};
}

} // namespace detail

/// Looks up a node by slash-separated path ("deviceContext/batteryStatus").
/// Repeated sibling names are disambiguated with a 0-based suffix:
/// "sensorList/sensor[1]". The empty path names the root. Case-sensitive.
/// Returns nullptr when no node matches.
inline const ElementNode* find_element(const ElementNode& root, std::string_view path) {
  const ElementNode* node = &root;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    if (pos == path.size()) break;
    auto slash = path.find('/', pos);
    const auto seg_text = path.substr(pos, slash == std::string_view::npos ? std::string_view::npos
                                                                           : slash - pos);
    auto seg = detail::parse_segment(seg_text);
    if (!seg) return nullptr;
    const ElementNode* next = nullptr;
    std::size_t seen = 0;
    for (const auto& c : node->children) {
      if (c.name != seg->name) continue;
      if (seen == seg->index) {
        next = &c;
        break;
      }
      ++seen;
    }
    if (!next) return nullptr;
    node = next;
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return node;
}

/// Path lookup that treats absence as an error. Throws NotFound.
inline const ElementNode& element_at(const ElementNode& root, std::string_view path) {
  const ElementNode* node = find_element(root, path);
  if (!node) throw NotFound("no element at path '" + std::string(path) + "'");
  return *node;
}

namespace detail {

inline void enumerate_into(const ElementNode& node, const std::string& prefix,
                           std::vector<std::pair<std::string, const ElementNode*>>& out) {
  out.emplace_back(prefix, &node);
  // Count name occurrences so repeated siblings get an index suffix.
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const auto& c = node.children[i];
    std::size_t total = 0;
    std::size_t before = 0;
    for (std::size_t j = 0; j < node.children.size(); ++j) {
      if (node.children[j].name != c.name) continue;
      ++total;
      if (j < i) ++before;
    }
    std::string seg = c.name;
    if (total > 1) seg += "[" + std::to_string(before) + "]";
    enumerate_into(c, prefix.empty() ? seg : prefix + "/" + seg, out);
  }
}

} // namespace detail

/// Enumerates every node with the path that find_element resolves back to it.
/// The root appears first with the empty path.
inline std::vector<std::pair<std::string, const ElementNode*>>
enumerate_paths(const ElementNode& root) {
  std::vector<std::pair<std::string, const ElementNode*>> out;
  detail::enumerate_into(root, "", out);
  return out;
}

/// Leaf count split by the isDynamic flag; containers are not counted.
struct LeafCounts {
  std::size_t static_leaves = 0;
  std::size_t dynamic_leaves = 0;
};

inline void count_leaves(const ElementNode& node, LeafCounts& counts) {
  if (node.is_scalar()) {
    (node.is_dynamic ? counts.dynamic_leaves : counts.static_leaves) += 1;
    return;
  }
  for (const auto& c : node.children) count_leaves(c, counts);
}

inline LeafCounts count_leaves(const ElementNode& node) {
  LeafCounts counts;
  count_leaves(node, counts);
  return counts;
}

} // namespace mobidesc
