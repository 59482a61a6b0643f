#pragma once

#include <map>
#include <string>
#include <vector>

#include "mobidesc/model/coverage.hpp"
#include "mobidesc/sim/fixtures.hpp"

namespace mobidesc {

struct CoverageCell {
  std::string section;
  std::string label;
  bool required = false;
  bool present = false;
};

/// Requirement-coverage check of one case study against a profile: every
/// required matrix row must be present; optional rows may be present or not.
struct ConformanceReport {
  std::string fixture;
  ServiceClass profile_class = ServiceClass::Automated;
  std::vector<CoverageCell> cells; // kCoverageRows order
  bool conformant = true;

  std::vector<std::string> missing_labels() const {
    std::vector<std::string> labels;
    for (const auto& cell : cells) {
      if (cell.required && !cell.present) labels.push_back(cell.label);
    }
    return labels;
  }
};

/// Row presence across the whole fixture: registry-resident documents
/// (functional, static halves) and provider-resident documents both count,
/// so a split kind's row is present when either half populates it.
inline std::array<bool, kCoverageRowCount> coverage_presence(const CaseStudy& fixture) {
  std::vector<DescriptionDocument> documents;
  auto add_parsed = [&](const std::string& bytes) {
    try {
      documents.push_back(parse(bytes));
    } catch (const Error&) {
      // Unusable bytes contribute no rows.
    }
  };
  add_parsed(fixture.record.functional_xml);
  if (fixture.record.data_source_static_xml) add_parsed(*fixture.record.data_source_static_xml);
  if (fixture.record.hardware_static_xml) add_parsed(*fixture.record.hardware_static_xml);
  for (const auto& [slot, doc] : fixture.provider_bundle.documents) documents.push_back(doc);

  std::array<bool, kCoverageRowCount> present{};
  for (std::size_t i = 0; i < kCoverageRows.size(); ++i) {
    for (const auto& doc : documents) {
      if (row_present_in(kCoverageRows[i], doc)) present[i] = true;
    }
  }
  return present;
}

inline ConformanceReport verify_coverage(const CaseStudy& fixture,
                                         const RequirementMatrix& profile) {
  ConformanceReport report;
  report.fixture = fixture.name;
  report.profile_class = profile.service_class;
  const auto present = coverage_presence(fixture);
  for (std::size_t i = 0; i < kCoverageRows.size(); ++i) {
    CoverageCell cell;
    cell.section = std::string(kCoverageRows[i].section);
    cell.label = std::string(kCoverageRows[i].label);
    cell.required = profile.required[i];
    cell.present = present[i];
    if (cell.required && !cell.present) report.conformant = false;
    report.cells.push_back(std::move(cell));
  }
  return report;
}

} // namespace mobidesc
