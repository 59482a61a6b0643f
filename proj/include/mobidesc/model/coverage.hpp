#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "mobidesc/model/document.hpp"
#include "mobidesc/model/kinds.hpp"

namespace mobidesc {

/// One row of the case-study requirement-coverage matrix.
struct CoverageRow {
  std::string_view section; // description document the row belongs to
  std::string_view label;   // placeholder label as printed in the matrix
  Kind kind;
  std::string_view group;   // document group the label maps onto; "" = special
};

/// The 29 matrix rows in table order. "Include" is the import linkage of the
/// functional description; every other row is one top-level placeholder.
inline constexpr std::array<CoverageRow, 29> kCoverageRows = {{
    {"Functional Description", "Include", Kind::Functional, ""},
    {"Functional Description", "Types", Kind::Functional, "types"},
    {"Functional Description", "Interface", Kind::Functional, "interface"},
    {"Functional Description", "Binding", Kind::Functional, "binding"},
    {"Functional Description", "Service", Kind::Functional, "service"},
    {"Non-functional Description", "ServiceQoS", Kind::NonFunctional, "serviceQoS"},
    {"Non-functional Description", "NetworkQoS", Kind::NonFunctional, "networkQoS"},
    {"Non-functional Description", "SystemQoS", Kind::NonFunctional, "systemQoS"},
    {"Non-functional Description", "OtherQoS", Kind::NonFunctional, "otherQoS"},
    {"Business Description", "Legality", Kind::Business, "legality"},
    {"Business Description", "Certification", Kind::Business, "certification"},
    {"Business Description", "UsageRequirement", Kind::Business, "usageRequirement"},
    {"Business Description", "Cost/Price", Kind::Business, "cost"},
    {"Contextual Description", "DeviceContext", Kind::Contextual, "deviceContext"},
    {"Contextual Description", "UserContext", Kind::Contextual, "userContext"},
    {"Contextual Description", "ServiceContext", Kind::Contextual, "serviceContext"},
    {"Contextual Description", "BusinessContext", Kind::Contextual, "businessContext"},
    {"Data Source Description", "LocationDetail", Kind::DataSource, "locationDetail"},
    {"Data Source Description", "CapacityDetail", Kind::DataSource, "capacityDetail"},
    {"Data Source Description", "QoSDetail", Kind::DataSource, "qosDetail"},
    {"Data Source Description", "ContextualDetail", Kind::DataSource, "contextualDetail"},
    {"Collaborator Description", "FunctionalDetail", Kind::Collaborator, "functionalDetail"},
    {"Collaborator Description", "BusinessDetail", Kind::Collaborator, "businessDetail"},
    {"Collaborator Description", "ReputationDetail", Kind::Collaborator, "reputationDetail"},
    {"Collaborator Description", "UpdateFrequency", Kind::Collaborator, "updateFrequency"},
    {"Hardware Description", "SensorList", Kind::Hardware, "sensorList"},
    {"Hardware Description", "MemoryDetail", Kind::Hardware, "memoryDetail"},
    {"Hardware Description", "PowerDetail", Kind::Hardware, "powerDetail"},
    {"Hardware Description", "ManufacturerDetail", Kind::Hardware, "manufacturerDetail"},
}};

inline constexpr std::size_t kCoverageRowCount = kCoverageRows.size();

inline std::optional<std::size_t> coverage_row_index(std::string_view label) {
  for (std::size_t i = 0; i < kCoverageRows.size(); ++i) {
    if (kCoverageRows[i].label == label) return i;
  }
  return std::nullopt;
}

/// Which matrix rows a service class requires, indexed like kCoverageRows.
struct RequirementMatrix {
  ServiceClass service_class;
  std::array<bool, kCoverageRowCount> required;

  bool requires_row(std::string_view label) const {
    auto idx = coverage_row_index(label);
    return idx && required[*idx];
  }
};

/// The matrix column of the class's case-study exemplar: Automated follows
/// SalesmanTracking, SemiAutomated follows MallLatestOffer, Manual follows
/// CarPoolingMate.
inline RequirementMatrix requirement_profile(ServiceClass service_class) {
  RequirementMatrix matrix;
  matrix.service_class = service_class;
  matrix.required.fill(true);
  auto drop = [&](std::string_view label) { matrix.required[*coverage_row_index(label)] = false; };
  switch (service_class) {
    case ServiceClass::Automated:
      break; // every row required
    case ServiceClass::SemiAutomated:
      drop("Legality");
      drop("SensorList");
      break;
    case ServiceClass::Manual:
      drop("OtherQoS");
      drop("Certification");
      drop("LocationDetail");
      drop("CapacityDetail");
      drop("QoSDetail");
      drop("ContextualDetail");
      drop("FunctionalDetail");
      drop("BusinessDetail");
      drop("ReputationDetail");
      drop("UpdateFrequency");
      drop("SensorList");
      break;
  }
  return matrix;
}

/// Row presence over one document (or one half of a split document): the
/// mapped group is populated, or for "Include" the import list is non-empty.
inline bool row_present_in(const CoverageRow& row, const DescriptionDocument& doc) {
  if (doc.kind != row.kind) return false;
  if (row.group.empty()) return !doc.imports.empty(); // Include
  // Repeatable groups (interface, binding) may occur several times; the row
  // is present when any occurrence is populated.
  bool present = false;
  for (const auto& g : doc.root.children) {
    if (g.name != row.group) continue;
    if (g.is_scalar() ? !g.value->empty() : !g.children.empty()) present = true;
  }
  return present;
}

} // namespace mobidesc
