#pragma once

#include <charconv>
#include <optional>
#include <string_view>
#include <vector>

#include "mobidesc/core/time.hpp"
#include "mobidesc/model/element.hpp"
#include "mobidesc/model/kinds.hpp"

namespace mobidesc {

/// Constraint on a scalar's text value.
enum class ValueKind {
  Text,
  Boolean,        // "true" | "false"
  NonNegNumber,
  PositiveNumber,
  Fraction01,     // [0, 1]
  Percent0100,    // [0, 100]
  Latitude,       // [-90, 90]
  Longitude,      // [-180, 180]
  IntegerPositive,
  IntegerNonNeg,
  Timestamp,      // ISO-8601 UTC ms
  Uri,
};

/// Schema node: the admissible shape of one placeholder. Containers list
/// their admissible children; extensible containers additionally accept
/// children with arbitrary names (preserved verbatim by the codec).
struct NodeSpec {
  std::string_view name;
  bool is_container = false;
  bool repeatable = false;   // may occur more than once among siblings
  bool extensible = false;   // container also accepts unknown child names
  bool dynamic = false;      // schema default for isDynamic
  ValueKind value = ValueKind::Text;
  std::string_view unit{};   // required unit tag; empty = none
  std::vector<NodeSpec> children{};
};

/// Whole-document schema for one kind.
struct KindSchema {
  Kind kind;
  std::vector<NodeSpec> groups;   // top-level placeholders in schema order
  bool enforce_partition = false; // split kinds: subtree flags must match group
  bool allows_imports = false;    // Functional only
  bool has_timestamp = true;      // all kinds except Functional
  bool materialize_groups = true; // build creates empty non-repeatable groups
};

namespace schema_detail {

inline NodeSpec leaf(std::string_view name, ValueKind v = ValueKind::Text,
                     std::string_view unit = {}, bool dynamic = false) {
  NodeSpec n;
  n.name = name;
  n.value = v;
  n.unit = unit;
  n.dynamic = dynamic;
  return n;
}

inline NodeSpec group(std::string_view name, std::vector<NodeSpec> children,
                      bool dynamic = false) {
  NodeSpec n;
  n.name = name;
  n.is_container = true;
  n.dynamic = dynamic;
  n.children = std::move(children);
  return n;
}

inline NodeSpec repeated(NodeSpec n) {
  n.repeatable = true;
  return n;
}

inline NodeSpec open(NodeSpec n) {
  n.extensible = true;
  return n;
}

// Functional structure is shared with Collaborator.functionalDetail (a
// collaborator may embed an inline copy).
inline std::vector<NodeSpec> functional_children() {
  return {
      group("types", {repeated(leaf("messageType"))}),
      repeated(group("interface",
                     {leaf("name"),
                      repeated(group("operation", {leaf("name"), leaf("input"), leaf("output"),
                                                   leaf("pattern")}))})),
      repeated(group("binding", {leaf("name"), leaf("interfaceRef"), leaf("protocol"),
                                 repeated(group("parameter", {leaf("key"), leaf("value")}))})),
      group("service", {leaf("endpoint", ValueKind::Uri)}),
  };
}

inline std::vector<NodeSpec> business_children() {
  return {
      group("legality", {repeated(group("condition", {leaf("jurisdiction"), leaf("text")}))}),
      group("certification", {repeated(group("certificate", {leaf("name"), leaf("issuer"),
                                                             leaf("expiry", ValueKind::Timestamp)}))}),
      group("usageRequirement", {repeated(group("requirement", {leaf("key"), leaf("minimum")}))}),
      group("cost", {repeated(group("price", {leaf("amount", ValueKind::NonNegNumber),
                                              leaf("currency"), leaf("chargingModel")}))}),
  };
}

} // namespace schema_detail

/// Placeholder vocabulary per kind. Names follow the paper's spelling with
/// multi-word prose names folded to camelCase so they are legal XML names.
/// Extending a closed group is a schema change here, not a runtime feature.
inline const KindSchema& kind_schema(Kind kind) {
  using namespace schema_detail;
  static const KindSchema functional = [] {
    KindSchema s;
    s.kind = Kind::Functional;
    s.groups = functional_children();
    s.allows_imports = true;
    s.has_timestamp = false;
    s.materialize_groups = false;
    return s;
  }();
  static const KindSchema non_functional = [] {
    KindSchema s;
    s.kind = Kind::NonFunctional;
    s.groups = {
        group("serviceQoS",
              {leaf("availability", ValueKind::Fraction01, "fraction"),
               leaf("capacity", ValueKind::NonNegNumber, "sessions"),
               leaf("latency", ValueKind::NonNegNumber, "ms"),
               leaf("throughput", ValueKind::NonNegNumber, "rps"),
               leaf("performance", ValueKind::NonNegNumber, "score"),
               leaf("reliability", ValueKind::Fraction01, "fraction")}),
        group("networkQoS",
              {leaf("packetLoss", ValueKind::Fraction01, "fraction"),
               leaf("networkDelay", ValueKind::NonNegNumber, "ms"),
               leaf("delayVariation", ValueKind::NonNegNumber, "ms"),
               leaf("bandwidthCapability", ValueKind::Text, {}, true)}),
        group("systemQoS",
              {leaf("accessibility"), leaf("security"), leaf("usability"), leaf("scalability"),
               leaf("interoperability"), leaf("robustness"), leaf("extensibility")}),
        open(group("otherQoS", {})),
    };
    return s;
  }();
  static const KindSchema contextual = [] {
    KindSchema s;
    s.kind = Kind::Contextual;
    s.groups = {
        group("deviceContext",
              {group("sensors", {repeated(leaf("sensor"))}),
               leaf("batteryStatus", ValueKind::Percent0100, "percent", true),
               leaf("charging", ValueKind::Boolean, {}, true),
               leaf("dataPlan"),
               leaf("networkType", ValueKind::Text, {}, true)}),
        group("userContext",
              {leaf("availability"), leaf("background"), leaf("situation"),
               group("location",
                     {leaf("address"),
                      group("gpsCoordinates",
                            {leaf("latitude", ValueKind::Latitude, {}, true),
                             leaf("longitude", ValueKind::Longitude, {}, true)},
                            true),
                      leaf("timeZone")},
                     true),
               leaf("presence", ValueKind::Text, {}, true)}),
        group("serviceContext",
              {leaf("domain"), leaf("connectionPreference"), leaf("specialisations")}),
        open(group("businessContext",
                   {leaf("preferredScenario"), leaf("preferredPartners"), leaf("compositions")})),
    };
    return s;
  }();
  static const KindSchema business = [] {
    KindSchema s;
    s.kind = Kind::Business;
    s.groups = business_children();
    return s;
  }();
  static const KindSchema data_source = [] {
    KindSchema s;
    s.kind = Kind::DataSource;
    // Partition of the split: location and contextual detail track provider
    // movement (dynamic half); capacity and claimed QoS are the static half.
    s.groups = {
        group("locationDetail",
              {group("gpsCoordinates",
                     {leaf("latitude", ValueKind::Latitude, {}, true),
                      leaf("longitude", ValueKind::Longitude, {}, true)},
                     true),
               leaf("locationText", ValueKind::Text, {}, true)},
              true),
        group("capacityDetail",
              {leaf("physicalCapacity"),
               leaf("battery", ValueKind::Percent0100, "percent"),
               leaf("computationCapacity")}),
        group("qosDetail",
              {leaf("availability", ValueKind::Fraction01, "fraction"),
               leaf("throughput", ValueKind::NonNegNumber, "rps"),
               leaf("reliability", ValueKind::Fraction01, "fraction"),
               leaf("networkDelay", ValueKind::NonNegNumber, "ms"),
               leaf("security")}),
        open(group("contextualDetail", {}, true)),
    };
    s.enforce_partition = true;
    return s;
  }();
  static const KindSchema collaborator = [] {
    KindSchema s;
    s.kind = Kind::Collaborator;
    std::vector<NodeSpec> functional_detail = {leaf("reference", ValueKind::Uri)};
    for (auto& c : functional_children()) functional_detail.push_back(std::move(c));
    s.groups = {
        group("functionalDetail", std::move(functional_detail)),
        group("businessDetail", business_children()),
        group("reputationDetail", {leaf("score", ValueKind::Fraction01, "fraction"),
                                   leaf("feedbackCount", ValueKind::IntegerNonNeg)}),
        leaf("updateFrequency", ValueKind::PositiveNumber, "seconds"),
    };
    return s;
  }();
  static const KindSchema hardware = [] {
    KindSchema s;
    s.kind = Kind::Hardware;
    s.groups = {
        group("sensorList", {repeated(group("sensor", {leaf("name"), leaf("functionality")}))}),
        group("manufacturerDetail",
              {leaf("manufacturer"), leaf("kernelVersion"), leaf("processor"), leaf("adapters")}),
        group("memoryDetail",
              {leaf("primaryMb", ValueKind::NonNegNumber, "MB"),
               leaf("secondaryMb", ValueKind::NonNegNumber, "MB"),
               leaf("externalLocations"),
               leaf("freeMb", ValueKind::NonNegNumber, "MB", true)},
              true),
        group("powerDetail",
              {leaf("batteryPercent", ValueKind::Percent0100, "percent", true),
               leaf("charging", ValueKind::Boolean, {}, true),
               leaf("estimatedRuntimeMinutes", ValueKind::NonNegNumber, "minutes", true)},
              true),
    };
    s.enforce_partition = true;
    return s;
  }();
  static const KindSchema consumer_base = [] {
    KindSchema s;
    s.kind = Kind::ConsumerBase;
    s.groups = {repeated(group("consumer", {leaf("identity"),
                                            leaf("invocationCount", ValueKind::IntegerPositive),
                                            leaf("lastInvocation", ValueKind::Timestamp)}))};
    s.materialize_groups = false;
    return s;
  }();
  switch (kind) {
    case Kind::Functional: return functional;
    case Kind::NonFunctional: return non_functional;
    case Kind::Contextual: return contextual;
    case Kind::Business: return business;
    case Kind::DataSource: return data_source;
    case Kind::Collaborator: return collaborator;
    case Kind::Hardware: return hardware;
    case Kind::ConsumerBase: return consumer_base;
  }
  return functional; // unreachable
}

inline const NodeSpec* find_spec(const std::vector<NodeSpec>& specs, std::string_view name) {
  for (const auto& s : specs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

/// Position of a child name in schema order; unknown names sort last.
inline std::size_t schema_position(const std::vector<NodeSpec>& specs, std::string_view name) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].name == name) return i;
  }
  return specs.size();
}

/// Schema-level partition of a split kind's top-level group: true = dynamic
/// half (provider-resident), false = static half (registry-resident).
/// Unknown group names land in the dynamic half.
inline bool group_is_dynamic(Kind kind, std::string_view group_name) {
  const NodeSpec* spec = find_spec(kind_schema(kind).groups, group_name);
  return spec ? spec->dynamic : true;
}

namespace schema_detail {

inline std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return out;
}

inline bool parse_integer(std::string_view text, long long& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

} // namespace schema_detail

/// Syntactic absolute-URI check: scheme ':' non-empty remainder.
inline bool looks_like_uri(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 >= text.size()) return false;
  const char head = text[0];
  if (!((head >= 'a' && head <= 'z') || (head >= 'A' && head <= 'Z'))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = text[i];
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '+' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

/// Checks a scalar text against a ValueKind. Returns an error message or
/// nullopt when the value is admissible.
inline std::optional<std::string> check_value(ValueKind kind, std::string_view text) {
  using schema_detail::parse_integer;
  using schema_detail::parse_number;
  auto number_in = [&](double lo, double hi) -> std::optional<std::string> {
    auto v = parse_number(text);
    if (!v) return "not a number: '" + std::string(text) + "'";
    if (*v < lo || *v > hi)
      return "value " + std::string(text) + " outside [" + std::to_string(lo) + ", " +
             std::to_string(hi) + "]";
    return std::nullopt;
  };
  switch (kind) {
    case ValueKind::Text:
      return std::nullopt;
    case ValueKind::Boolean:
      if (text == "true" || text == "false") return std::nullopt;
      return "not a boolean: '" + std::string(text) + "'";
    case ValueKind::NonNegNumber: {
      auto v = parse_number(text);
      if (!v) return "not a number: '" + std::string(text) + "'";
      if (*v < 0) return "negative value: '" + std::string(text) + "'";
      return std::nullopt;
    }
    case ValueKind::PositiveNumber: {
      auto v = parse_number(text);
      if (!v) return "not a number: '" + std::string(text) + "'";
      if (*v <= 0) return "value must be > 0: '" + std::string(text) + "'";
      return std::nullopt;
    }
    case ValueKind::Fraction01:
      return number_in(0.0, 1.0);
    case ValueKind::Percent0100:
      return number_in(0.0, 100.0);
    case ValueKind::Latitude:
      return number_in(-90.0, 90.0);
    case ValueKind::Longitude:
      return number_in(-180.0, 180.0);
    case ValueKind::IntegerPositive: {
      long long v = 0;
      if (!parse_integer(text, v)) return "not an integer: '" + std::string(text) + "'";
      if (v < 1) return "integer must be >= 1: '" + std::string(text) + "'";
      return std::nullopt;
    }
    case ValueKind::IntegerNonNeg: {
      long long v = 0;
      if (!parse_integer(text, v)) return "not an integer: '" + std::string(text) + "'";
      if (v < 0) return "integer must be >= 0: '" + std::string(text) + "'";
      return std::nullopt;
    }
    case ValueKind::Timestamp: {
      try {
        Instant::parse_iso8601(text);
        return std::nullopt;
      } catch (const BadTimestamp&) {
        return "not a timestamp: '" + std::string(text) + "'";
      }
    }
    case ValueKind::Uri:
      if (looks_like_uri(text)) return std::nullopt;
      return "not a URI: '" + std::string(text) + "'";
  }
  return std::nullopt; // unreachable
}

} // namespace mobidesc
