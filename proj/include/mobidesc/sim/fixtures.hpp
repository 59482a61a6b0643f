#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mobidesc/codec/codec.hpp"
#include "mobidesc/provider/agent.hpp"
#include "mobidesc/registry/registry.hpp"

namespace mobidesc {

/// One case-study service: what gets published to the registry plus the
/// documents its provider agent hosts.
struct CaseStudy {
  std::string name;
  ServiceClass service_class = ServiceClass::Automated;
  PublishRequest record;
  ServiceBundle provider_bundle;
};

struct FixtureOptions {
  std::string provider_endpoint; // defaults to loop://<short-name>
  Instant base = Instant::from_millis(1433160000000);
};

namespace fixture_detail {

// Element values below are synthetic: the case studies fix which placeholders
// exist, not their contents.
constexpr std::string_view kSyntheticNote = "synthetic case-study values";

inline ImportLink import_for(Kind kind, const std::string& endpoint) {
  return ImportLink{import_namespace(kind),
                    endpoint + "/desc/" + std::string(slot_token(*provider_slot_of(kind))),
                    std::string(kind_token(kind)) + " description"};
}

inline ElementNode operation(std::string name) {
  return container("operation", {scalar("name", name), scalar("input", name + "Request"),
                                 scalar("output", name + "Response"), scalar("pattern", "in-out")});
}

inline DescriptionDocument functional_doc(const ServiceIdentity& service,
                                          const std::string& endpoint,
                                          std::vector<Kind> imported_kinds,
                                          const std::string& interface_name,
                                          std::vector<std::string> op_names) {
  std::vector<ImportLink> imports;
  for (Kind k : imported_kinds) imports.push_back(import_for(k, endpoint));
  ElementNode iface = container("interface", {scalar("name", interface_name)});
  for (auto& op : op_names) iface.children.push_back(operation(std::move(op)));
  DescriptionDocument doc = build_functional(
      service, std::move(imports),
      {container("types", {scalar("messageType", "xs:string payload"),
                           scalar("messageType", "xs:double coordinate")}),
       std::move(iface),
       container("binding", {scalar("name", "httpBinding"),
                             scalar("interfaceRef", interface_name), scalar("protocol", "http"),
                             container("parameter", {scalar("key", "method"),
                                                     scalar("value", "GET")})}),
       container("service", {scalar("endpoint", endpoint + "/invoke")})});
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

struct NonFunctionalSpec {
  bool other_qos = true;
};

inline DescriptionDocument non_functional_doc(const ServiceIdentity& service, Instant stamp,
                                              const NonFunctionalSpec& spec) {
  std::vector<ElementNode> entries = {
      container("serviceQoS", {scalar("availability", "0.98"), scalar("latency", "120"),
                               scalar("throughput", "40"), scalar("reliability", "0.97")}),
      container("networkQoS", {scalar("packetLoss", "0.01"), scalar("networkDelay", "35"),
                               scalar("bandwidthCapability", "high")}),
      container("systemQoS", {scalar("security", "transport-tls"), scalar("usability", "good")}),
  };
  if (spec.other_qos) {
    entries.push_back(container("otherQoS", {scalar("testability", "scripted"),
                                             scalar("auditability", "logged")}));
  }
  DescriptionDocument doc = build_document(Kind::NonFunctional, service, std::move(entries), stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

struct BusinessSpec {
  bool legality = true;
  bool certification = true;
};

inline DescriptionDocument business_doc(const ServiceIdentity& service, Instant stamp,
                                        const BusinessSpec& spec) {
  std::vector<ElementNode> entries;
  if (spec.legality) {
    entries.push_back(container(
        "legality", {container("condition", {scalar("jurisdiction", "IN"),
                                             scalar("text", "consumer consent required")})}));
  }
  if (spec.certification) {
    entries.push_back(container(
        "certification",
        {container("certificate", {scalar("name", "ISO-9001"), scalar("issuer", "TUV"),
                                   scalar("expiry", "2017-06-01T00:00:00.000Z")})}));
  }
  entries.push_back(container(
      "usageRequirement",
      {container("requirement", {scalar("key", "clientVersion"), scalar("minimum", "2.0")})}));
  entries.push_back(container(
      "cost", {container("price", {scalar("amount", "0.05"), scalar("currency", "EUR"),
                                   scalar("chargingModel", "perRequest")})}));
  DescriptionDocument doc = build_document(Kind::Business, service, std::move(entries), stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

inline DescriptionDocument contextual_doc(const ServiceIdentity& service, Instant stamp) {
  DescriptionDocument doc = build_document(
      Kind::Contextual, service,
      {container("deviceContext",
                 {container("sensors", {scalar("sensor", "GPS")}), scalar("batteryStatus", "80"),
                  scalar("charging", "false"), scalar("dataPlan", "capped-4G"),
                  scalar("networkType", "WiFi")}),
       container("userContext",
                 {scalar("availability", "working-hours"), scalar("background", "retail"),
                  scalar("situation", "walking"),
                  container("location",
                            {scalar("address", "MG Road, Indore"),
                             container("gpsCoordinates", {scalar("latitude", "22.7196"),
                                                          scalar("longitude", "75.8577")}),
                             scalar("timeZone", "UTC+05:30")}),
                  scalar("presence", "available")}),
       container("serviceContext",
                 {scalar("domain", "retail"), scalar("connectionPreference", "WiFi"),
                  scalar("specialisations", "local")}),
       container("businessContext", {scalar("preferredScenario", "in-campus"),
                                     scalar("preferredPartners", "local-brands")})},
      stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

inline DescriptionDocument data_source_doc(const ServiceIdentity& service, Instant stamp,
                                           const std::string& source_text) {
  DescriptionDocument doc = build_document(
      Kind::DataSource, service,
      {container("locationDetail",
                 {container("gpsCoordinates",
                            {scalar("latitude", "22.7196"), scalar("longitude", "75.8577")}),
                  scalar("locationText", source_text)}),
       container("capacityDetail",
                 {scalar("physicalCapacity", "embedded sensor"), scalar("battery", "80"),
                  scalar("computationCapacity", "low")}),
       container("qosDetail",
                 {scalar("availability", "0.99"), scalar("throughput", "10"),
                  scalar("reliability", "0.98"), scalar("networkDelay", "20"),
                  scalar("security", "none")}),
       container("contextualDetail",
                 {scalar("sourceKind", source_text), scalar("samplingRate", "1Hz")})},
      stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

inline DescriptionDocument collaborator_doc(const ServiceIdentity& service, Instant stamp,
                                            const std::string& partner_uri) {
  DescriptionDocument doc = build_document(
      Kind::Collaborator, service,
      {container("functionalDetail", {scalar("reference", partner_uri)}),
       container("businessDetail",
                 {container("cost",
                            {container("price", {scalar("amount", "0"), scalar("currency", "EUR"),
                                                 scalar("chargingModel", "free")})})}),
       container("reputationDetail",
                 {scalar("score", "0.9"), scalar("feedbackCount", "120")}),
       scalar("updateFrequency", "300")},
      stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

struct HardwareSpec {
  bool sensor_list = true;
};

inline DescriptionDocument hardware_doc(const ServiceIdentity& service, Instant stamp,
                                        const HardwareSpec& spec) {
  std::vector<ElementNode> entries;
  if (spec.sensor_list) {
    entries.push_back(container(
        "sensorList",
        {container("sensor", {scalar("name", "GPS"), scalar("functionality", "positioning")}),
         container("sensor",
                   {scalar("name", "accelerometer"), scalar("functionality", "motion")})}));
  }
  entries.push_back(container("manufacturerDetail",
                              {scalar("manufacturer", "Samsung"), scalar("kernelVersion", "3.4"),
                               scalar("processor", "dual-core"), scalar("adapters", "wifi,bt")}));
  entries.push_back(container("memoryDetail", {scalar("primaryMb", "2048"),
                                               scalar("secondaryMb", "16384"),
                                               scalar("externalLocations", "none"),
                                               scalar("freeMb", "512")}));
  entries.push_back(container("powerDetail",
                              {scalar("batteryPercent", "80"), scalar("charging", "false"),
                               scalar("estimatedRuntimeMinutes", "480")}));
  DescriptionDocument doc = build_document(Kind::Hardware, service, std::move(entries), stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

inline DescriptionDocument consumer_base_doc(const ServiceIdentity& service, Instant stamp) {
  DescriptionDocument doc = build_document(
      Kind::ConsumerBase, service,
      {container("consumer", {scalar("identity", "seed-consumer"), scalar("invocationCount", "3"),
                              scalar("lastInvocation", stamp.to_iso8601())})},
      stamp);
  doc.root.documentation = std::string(kSyntheticNote);
  return doc;
}

} // namespace fixture_detail

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"MallLatestOffer", "SalesmanTracking",
                                                 "CarPoolingMate"};
  return names;
}

/// Builds one of the three case-study services. SalesmanTracking (Automated)
/// populates every placeholder; MallLatestOffer (SemiAutomated) omits
/// legality entries and the sensor list; CarPoolingMate (Manual) has no data
/// source or collaborator documents and additionally omits otherQoS and
/// certification entries.
inline CaseStudy load_fixture(std::string_view name, const FixtureOptions& options = {}) {
  using namespace fixture_detail;
  const Instant stamp = options.base;

  CaseStudy fixture;
  fixture.name = std::string(name);

  ServiceIdentity service;
  std::string endpoint = options.provider_endpoint;
  if (name == "SalesmanTracking") {
    fixture.service_class = ServiceClass::Automated;
    service = ServiceIdentity{"SalesmanTracking", "urn:svc:salesman-tracking"};
    if (endpoint.empty()) endpoint = "loop://st";
  } else if (name == "MallLatestOffer") {
    fixture.service_class = ServiceClass::SemiAutomated;
    service = ServiceIdentity{"MallLatestOffer", "urn:svc:mall-latest-offer"};
    if (endpoint.empty()) endpoint = "loop://mlo";
  } else if (name == "CarPoolingMate") {
    fixture.service_class = ServiceClass::Manual;
    service = ServiceIdentity{"CarPoolingMate", "urn:svc:car-pooling-mate"};
    if (endpoint.empty()) endpoint = "loop://cpm";
  } else {
    throw FixtureError("unknown fixture '" + std::string(name) + "'");
  }

  const bool manual = fixture.service_class == ServiceClass::Manual;
  const bool automated = fixture.service_class == ServiceClass::Automated;

  std::vector<Kind> imported = {Kind::NonFunctional, Kind::Contextual, Kind::Business};
  if (!manual) {
    imported.push_back(Kind::DataSource);
    imported.push_back(Kind::Collaborator);
  }
  imported.push_back(Kind::Hardware);

  DescriptionDocument functional;
  if (name == "SalesmanTracking") {
    functional = functional_doc(service, endpoint, imported, "TrackingInterface",
                                {"getLocation", "planVisit"});
  } else if (name == "MallLatestOffer") {
    functional = functional_doc(service, endpoint, imported, "OfferInterface",
                                {"getLatestOffers", "listBrands"});
  } else {
    functional = functional_doc(service, endpoint, imported, "PoolingInterface",
                                {"findPoolingMate"});
  }

  ServiceBundle bundle;
  bundle.service = service;
  bundle.documents.emplace(Slot::NonFunctional,
                           non_functional_doc(service, stamp, NonFunctionalSpec{!manual}));
  bundle.documents.emplace(Slot::Contextual, contextual_doc(service, stamp));
  bundle.documents.emplace(
      Slot::Business,
      business_doc(service, stamp, BusinessSpec{/*legality=*/manual || automated,
                                                /*certification=*/!manual}));
  const HardwareSpec hardware_spec{/*sensor_list=*/automated};
  const DescriptionDocument hardware = hardware_doc(service, stamp, hardware_spec);
  bundle.documents.emplace(Slot::HardwareDynamic, dynamic_half(hardware));

  fixture.record.service_name = service.name;
  fixture.record.service_uri = service.uri;
  fixture.record.provider_endpoint = endpoint;
  fixture.record.functional_xml = serialize(functional).bytes;
  fixture.record.publish_instant = stamp;
  fixture.record.hardware_static_xml = serialize(static_half(hardware)).bytes;

  if (!manual) {
    const std::string source =
        name == "SalesmanTracking" ? "device GPS sensor" : "brand offer feed";
    const DescriptionDocument data_source = data_source_doc(service, stamp, source);
    bundle.documents.emplace(Slot::DataSourceDynamic, dynamic_half(data_source));
    fixture.record.data_source_static_xml = serialize(static_half(data_source)).bytes;
    const std::string partner = name == "SalesmanTracking" ? "urn:svc:mapping-service"
                                                           : "urn:svc:brand-offer-service";
    bundle.documents.emplace(Slot::Collaborator, collaborator_doc(service, stamp, partner));
  }
  bundle.documents.emplace(Slot::ConsumerBase, consumer_base_doc(service, stamp));

  fixture.provider_bundle = std::move(bundle);
  return fixture;
}

/// Writes a fixture to disk: registry/ holds the functional description and
/// static halves, provider/ holds the agent bundle, one canonical XML file
/// per slot token.
inline void write_fixture_dir(const CaseStudy& fixture, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir / "registry", ec);
  fs::create_directories(dir / "provider", ec);
  if (ec) throw IoError("cannot create fixture directory " + dir.string());
  auto write = [](const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    if (!out) throw IoError("cannot write " + path.string());
  };
  write(dir / "registry" / "functional.xml", fixture.record.functional_xml);
  if (fixture.record.data_source_static_xml) {
    write(dir / "registry" / "dataSource-static.xml", *fixture.record.data_source_static_xml);
  }
  if (fixture.record.hardware_static_xml) {
    write(dir / "registry" / "hardware-static.xml", *fixture.record.hardware_static_xml);
  }
  for (const auto& [slot, doc] : fixture.provider_bundle.documents) {
    write(dir / "provider" / (std::string(slot_token(slot)) + ".xml"), serialize(doc).bytes);
  }
}

} // namespace mobidesc
