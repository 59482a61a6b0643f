#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace mobidesc {

/// The eight description document kinds. Functional lives at the registry;
/// DataSource and Hardware are split between registry (static half) and
/// provider (dynamic half); everything else is provider-resident.
enum class Kind {
  Functional,
  NonFunctional,
  Contextual,
  Business,
  DataSource,
  Collaborator,
  Hardware,
  ConsumerBase,
};

inline constexpr std::array<Kind, 8> kAllKinds = {
    Kind::Functional,  Kind::NonFunctional, Kind::Contextual, Kind::Business,
    Kind::DataSource, Kind::Collaborator,  Kind::Hardware,   Kind::ConsumerBase,
};

/// A placement slot: where a retrievable document physically lives. Split
/// kinds occupy two slots, one per half.
enum class Slot {
  Functional,
  NonFunctional,
  Contextual,
  Business,
  DataSourceStatic,
  DataSourceDynamic,
  Collaborator,
  HardwareStatic,
  HardwareDynamic,
  ConsumerBase,
};

inline constexpr std::array<Slot, 10> kAllSlots = {
    Slot::Functional,       Slot::NonFunctional,    Slot::Contextual,
    Slot::Business,         Slot::DataSourceStatic, Slot::DataSourceDynamic,
    Slot::Collaborator,     Slot::HardwareStatic,   Slot::HardwareDynamic,
    Slot::ConsumerBase,
};

inline constexpr std::array<Slot, 3> kRegistrySlots = {
    Slot::Functional,
    Slot::DataSourceStatic,
    Slot::HardwareStatic,
};

inline constexpr std::array<Slot, 7> kProviderSlots = {
    Slot::NonFunctional,     Slot::Contextual,      Slot::Business,
    Slot::DataSourceDynamic, Slot::Collaborator,    Slot::HardwareDynamic,
    Slot::ConsumerBase,
};

constexpr bool is_split_kind(Kind k) {
  return k == Kind::DataSource || k == Kind::Hardware;
}

constexpr bool is_registry_slot(Slot s) {
  return s == Slot::Functional || s == Slot::DataSourceStatic || s == Slot::HardwareStatic;
}

constexpr bool is_provider_slot(Slot s) { return !is_registry_slot(s); }

constexpr Kind kind_of(Slot s) {
  switch (s) {
    case Slot::Functional: return Kind::Functional;
    case Slot::NonFunctional: return Kind::NonFunctional;
    case Slot::Contextual: return Kind::Contextual;
    case Slot::Business: return Kind::Business;
    case Slot::DataSourceStatic:
    case Slot::DataSourceDynamic: return Kind::DataSource;
    case Slot::Collaborator: return Kind::Collaborator;
    case Slot::HardwareStatic:
    case Slot::HardwareDynamic: return Kind::Hardware;
    case Slot::ConsumerBase: return Kind::ConsumerBase;
  }
  return Kind::Functional; // unreachable
}

/// Root element name on the wire.
constexpr std::string_view root_name(Kind k) {
  switch (k) {
    case Kind::Functional: return "functionalDescription";
    case Kind::NonFunctional: return "nonFunctionalDescription";
    case Kind::Contextual: return "contextualDescription";
    case Kind::Business: return "businessDescription";
    case Kind::DataSource: return "dataSourceDescription";
    case Kind::Collaborator: return "collaboratorDescription";
    case Kind::Hardware: return "hardwareDescription";
    case Kind::ConsumerBase: return "consumerBase";
  }
  return ""; // unreachable
}

constexpr std::optional<Kind> kind_from_root_name(std::string_view name) {
  for (Kind k : kAllKinds) {
    if (root_name(k) == name) return k;
  }
  return std::nullopt;
}

/// Kind token used in URLs, import namespaces, and file names.
constexpr std::string_view kind_token(Kind k) {
  switch (k) {
    case Kind::Functional: return "functional";
    case Kind::NonFunctional: return "nonFunctional";
    case Kind::Contextual: return "contextual";
    case Kind::Business: return "business";
    case Kind::DataSource: return "dataSource";
    case Kind::Collaborator: return "collaborator";
    case Kind::Hardware: return "hardware";
    case Kind::ConsumerBase: return "consumerBase";
  }
  return ""; // unreachable
}

constexpr std::optional<Kind> kind_from_token(std::string_view token) {
  for (Kind k : kAllKinds) {
    if (kind_token(k) == token) return k;
  }
  return std::nullopt;
}

/// Slot token used in wire paths: split kinds carry a -static/-dynamic suffix.
constexpr std::string_view slot_token(Slot s) {
  switch (s) {
    case Slot::Functional: return "functional";
    case Slot::NonFunctional: return "nonFunctional";
    case Slot::Contextual: return "contextual";
    case Slot::Business: return "business";
    case Slot::DataSourceStatic: return "dataSource-static";
    case Slot::DataSourceDynamic: return "dataSource-dynamic";
    case Slot::Collaborator: return "collaborator";
    case Slot::HardwareStatic: return "hardware-static";
    case Slot::HardwareDynamic: return "hardware-dynamic";
    case Slot::ConsumerBase: return "consumerBase";
  }
  return ""; // unreachable
}

constexpr std::optional<Slot> slot_from_token(std::string_view token) {
  for (Slot s : kAllSlots) {
    if (slot_token(s) == token) return s;
  }
  return std::nullopt;
}

/// The provider-side slot carrying a kind's dynamic (or whole) document.
constexpr std::optional<Slot> provider_slot_of(Kind k) {
  switch (k) {
    case Kind::Functional: return std::nullopt;
    case Kind::NonFunctional: return Slot::NonFunctional;
    case Kind::Contextual: return Slot::Contextual;
    case Kind::Business: return Slot::Business;
    case Kind::DataSource: return Slot::DataSourceDynamic;
    case Kind::Collaborator: return Slot::Collaborator;
    case Kind::Hardware: return Slot::HardwareDynamic;
    case Kind::ConsumerBase: return Slot::ConsumerBase;
  }
  return std::nullopt;
}

/// The registry-side static-half slot, for split kinds only.
constexpr std::optional<Slot> static_slot_of(Kind k) {
  if (k == Kind::DataSource) return Slot::DataSourceStatic;
  if (k == Kind::Hardware) return Slot::HardwareStatic;
  return std::nullopt;
}

/// Fixed import namespace per kind: urn:mobidesc:<token>.
inline std::string import_namespace(Kind k) {
  return std::string("urn:mobidesc:") + std::string(kind_token(k));
}

inline std::optional<Kind> kind_from_namespace(std::string_view ns) {
  constexpr std::string_view prefix = "urn:mobidesc:";
  if (ns.size() <= prefix.size() || ns.substr(0, prefix.size()) != prefix) return std::nullopt;
  return kind_from_token(ns.substr(prefix.size()));
}

/// Service classes of the case-study taxonomy.
enum class ServiceClass { Automated, SemiAutomated, Manual };

constexpr std::string_view to_string(ServiceClass c) {
  switch (c) {
    case ServiceClass::Automated: return "Automated";
    case ServiceClass::SemiAutomated: return "SemiAutomated";
    case ServiceClass::Manual: return "Manual";
  }
  return ""; // unreachable
}

constexpr std::optional<ServiceClass> service_class_from_string(std::string_view s) {
  if (s == "Automated") return ServiceClass::Automated;
  if (s == "SemiAutomated") return ServiceClass::SemiAutomated;
  if (s == "Manual") return ServiceClass::Manual;
  return std::nullopt;
}

} // namespace mobidesc
