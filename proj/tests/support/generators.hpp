#pragma once

// Seeded generators for property tests: schema-conforming documents of every
// kind, built through build_document so the schema-closure property is
// exercised on realistic shapes.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mobidesc/model/build.hpp"
#include "mobidesc/model/document.hpp"

namespace testgen {

using namespace mobidesc;

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  bool chance(unsigned percent) { return below(100) < percent; }

  // Tokens exercise escaping: ampersands, angle brackets, quotes, UTF-8.
  std::string token() {
    static const char* pool[] = {"alpha",  "beta",    "gamma", "a&b",   "x<y>z",
                                 "\"q\"",  "caf\xC3\xA9", "walking", "busy",  "driving",
                                 "retail", "tracking"};
    return pool[below(std::size(pool))];
  }

  std::string name_token() {
    static const char* pool[] = {"testability", "modifiability", "auditability", "customTag",
                                 "preferredScenario", "extra.detail", "zone-a"};
    return pool[below(std::size(pool))];
  }

  std::string fraction() {
    return "0." + std::to_string(below(100) / 10) + std::to_string(below(10));
  }

  std::string percent() { return std::to_string(below(101)); }

  std::string non_neg(std::uint64_t cap = 10'000) { return std::to_string(below(cap)); }

  std::string boolean() { return chance(50) ? "true" : "false"; }

  Instant instant() { return Instant::from_millis(1'400'000'000'000 + below(100'000'000) * 1000); }

  std::mt19937_64 engine_;
};

inline ServiceIdentity random_service(Rng& rng) {
  static const char* names[] = {"SalesmanTracking", "MallLatestOffer", "CarPoolingMate",
                                "LodgingFinder", "FoodBuddy"};
  const std::string name = names[rng.below(std::size(names))];
  return ServiceIdentity{name, "urn:svc:" + name + "-" + std::to_string(rng.below(1000))};
}

inline std::vector<ElementNode> random_non_functional_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  ElementNode service_qos = container("serviceQoS");
  if (rng.chance(80)) service_qos.children.push_back(scalar("availability", rng.fraction()));
  if (rng.chance(50)) service_qos.children.push_back(scalar("latency", rng.non_neg(5000)));
  if (rng.chance(50)) service_qos.children.push_back(scalar("throughput", rng.non_neg(1000)));
  if (rng.chance(40)) service_qos.children.push_back(scalar("reliability", rng.fraction()));
  ElementNode network_qos = container("networkQoS");
  if (rng.chance(60)) network_qos.children.push_back(scalar("packetLoss", rng.fraction()));
  if (rng.chance(60)) network_qos.children.push_back(scalar("bandwidthCapability", "high"));
  ElementNode system_qos = container("systemQoS");
  if (rng.chance(50)) system_qos.children.push_back(scalar("security", rng.token()));
  ElementNode other_qos = container("otherQoS");
  const std::size_t extras = rng.below(3);
  for (std::size_t i = 0; i < extras; ++i) {
    other_qos.children.push_back(scalar(rng.name_token(), rng.token()));
  }
  entries.push_back(std::move(service_qos));
  entries.push_back(std::move(network_qos));
  entries.push_back(std::move(system_qos));
  entries.push_back(std::move(other_qos));
  return entries;
}

inline std::vector<ElementNode> random_contextual_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  ElementNode device = container("deviceContext");
  if (rng.chance(80)) device.children.push_back(scalar("batteryStatus", rng.percent()));
  if (rng.chance(50)) device.children.push_back(scalar("charging", rng.boolean()));
  if (rng.chance(50)) device.children.push_back(scalar("networkType", "WiFi"));
  if (rng.chance(30)) {
    device.children.push_back(container("sensors", {scalar("sensor", "GPS")}));
  }
  ElementNode user = container("userContext");
  if (rng.chance(60)) user.children.push_back(scalar("presence", rng.token()));
  if (rng.chance(60)) {
    user.children.push_back(container(
        "location",
        {scalar("address", rng.token()),
         container("gpsCoordinates",
                   {scalar("latitude", std::to_string(static_cast<int>(rng.below(181)) - 90)),
                    scalar("longitude", std::to_string(static_cast<int>(rng.below(361)) - 180))}),
         scalar("timeZone", "UTC+2")}));
  }
  ElementNode service_ctx = container("serviceContext");
  if (rng.chance(50)) service_ctx.children.push_back(scalar("domain", rng.token()));
  ElementNode business_ctx = container("businessContext");
  const std::size_t extras = rng.below(3);
  for (std::size_t i = 0; i < extras; ++i) {
    business_ctx.children.push_back(scalar(rng.name_token(), rng.token()));
  }
  entries.push_back(std::move(device));
  entries.push_back(std::move(user));
  entries.push_back(std::move(service_ctx));
  entries.push_back(std::move(business_ctx));
  return entries;
}

inline std::vector<ElementNode> random_business_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  ElementNode legality = container("legality");
  if (rng.chance(50)) {
    legality.children.push_back(
        container("condition", {scalar("jurisdiction", "EU"), scalar("text", rng.token())}));
  }
  ElementNode certification = container("certification");
  if (rng.chance(50)) {
    certification.children.push_back(
        container("certificate", {scalar("name", "ISO-9001"), scalar("issuer", rng.token()),
                                  scalar("expiry", rng.instant().to_iso8601())}));
  }
  ElementNode usage = container("usageRequirement");
  if (rng.chance(50)) {
    usage.children.push_back(
        container("requirement", {scalar("key", "clientVersion"), scalar("minimum", "2.0")}));
  }
  ElementNode cost = container("cost");
  const std::size_t prices = rng.below(3);
  for (std::size_t i = 0; i < prices; ++i) {
    cost.children.push_back(container("price", {scalar("amount", rng.non_neg(100)),
                                                scalar("currency", "EUR"),
                                                scalar("chargingModel", "perUse")}));
  }
  entries.push_back(std::move(legality));
  entries.push_back(std::move(certification));
  entries.push_back(std::move(usage));
  entries.push_back(std::move(cost));
  return entries;
}

inline std::vector<ElementNode> random_data_source_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  ElementNode location = container("locationDetail");
  if (rng.chance(70)) {
    location.children.push_back(
        container("gpsCoordinates", {scalar("latitude", "22.52"), scalar("longitude", "75.92")}));
    location.children.push_back(scalar("locationText", rng.token()));
  }
  ElementNode capacity = container("capacityDetail");
  if (rng.chance(60)) capacity.children.push_back(scalar("battery", rng.percent()));
  if (rng.chance(40)) capacity.children.push_back(scalar("physicalCapacity", rng.token()));
  ElementNode qos = container("qosDetail");
  if (rng.chance(60)) qos.children.push_back(scalar("availability", rng.fraction()));
  if (rng.chance(40)) qos.children.push_back(scalar("networkDelay", rng.non_neg(500)));
  ElementNode contextual = container("contextualDetail");
  const std::size_t extras = rng.below(3);
  for (std::size_t i = 0; i < extras; ++i) {
    contextual.children.push_back(scalar(rng.name_token(), rng.token()));
  }
  entries.push_back(std::move(location));
  entries.push_back(std::move(capacity));
  entries.push_back(std::move(qos));
  entries.push_back(std::move(contextual));
  return entries;
}

inline std::vector<ElementNode> random_collaborator_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  ElementNode functional = container("functionalDetail");
  if (rng.chance(70)) {
    functional.children.push_back(scalar("reference", "urn:svc:partner-" + rng.non_neg(100)));
  }
  ElementNode business = container("businessDetail");
  if (rng.chance(50)) {
    business.children.push_back(container(
        "cost", {container("price", {scalar("amount", rng.non_neg(50)), scalar("currency", "EUR"),
                                     scalar("chargingModel", "flat")})}));
  }
  ElementNode reputation = container("reputationDetail");
  if (rng.chance(80)) {
    reputation.children.push_back(scalar("score", rng.fraction()));
    reputation.children.push_back(scalar("feedbackCount", rng.non_neg(500)));
  }
  entries.push_back(std::move(functional));
  entries.push_back(std::move(business));
  entries.push_back(std::move(reputation));
  if (rng.chance(70)) {
    entries.push_back(scalar("updateFrequency", std::to_string(1 + rng.below(3600))));
  }
  return entries;
}

inline std::vector<ElementNode> random_hardware_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  ElementNode sensors = container("sensorList");
  const std::size_t sensor_count = rng.below(3);
  for (std::size_t i = 0; i < sensor_count; ++i) {
    sensors.children.push_back(
        container("sensor", {scalar("name", "sensor" + std::to_string(i)),
                             scalar("functionality", rng.token())}));
  }
  ElementNode manufacturer = container("manufacturerDetail");
  if (rng.chance(70)) manufacturer.children.push_back(scalar("manufacturer", rng.token()));
  if (rng.chance(40)) manufacturer.children.push_back(scalar("kernelVersion", "4.4"));
  ElementNode memory = container("memoryDetail");
  if (rng.chance(70)) memory.children.push_back(scalar("primaryMb", rng.non_neg(8192)));
  if (rng.chance(50)) memory.children.push_back(scalar("freeMb", rng.non_neg(4096)));
  ElementNode power = container("powerDetail");
  if (rng.chance(80)) power.children.push_back(scalar("batteryPercent", rng.percent()));
  if (rng.chance(50)) power.children.push_back(scalar("charging", rng.boolean()));
  entries.push_back(std::move(sensors));
  entries.push_back(std::move(manufacturer));
  entries.push_back(std::move(memory));
  entries.push_back(std::move(power));
  return entries;
}

inline std::vector<ElementNode> random_consumer_base_entries(Rng& rng) {
  std::vector<ElementNode> entries;
  const std::size_t consumers = rng.below(4);
  for (std::size_t i = 0; i < consumers; ++i) {
    entries.push_back(container(
        "consumer", {scalar("identity", "consumer-" + std::to_string(i)),
                     scalar("invocationCount", std::to_string(1 + rng.below(40))),
                     scalar("lastInvocation", rng.instant().to_iso8601())}));
  }
  return entries;
}

inline std::vector<ElementNode> random_functional_entries(Rng& rng,
                                                          std::vector<std::string>& op_names) {
  std::vector<ElementNode> entries;
  ElementNode types = container("types");
  if (rng.chance(60)) types.children.push_back(scalar("messageType", "xs:string " + rng.token()));
  entries.push_back(std::move(types));
  const std::size_t interfaces = 1 + rng.below(2);
  std::vector<std::string> interface_names;
  for (std::size_t i = 0; i < interfaces; ++i) {
    const std::string iface_name = "Interface" + std::to_string(i);
    interface_names.push_back(iface_name);
    ElementNode iface = container("interface", {scalar("name", iface_name)});
    const std::size_t ops = 1 + rng.below(3);
    for (std::size_t o = 0; o < ops; ++o) {
      const std::string op = "op" + std::to_string(rng.below(50));
      op_names.push_back(op);
      iface.children.push_back(container("operation", {scalar("name", op),
                                                       scalar("input", op + "Request"),
                                                       scalar("output", op + "Response"),
                                                       scalar("pattern", "in-out")}));
    }
    entries.push_back(std::move(iface));
  }
  const std::size_t bindings = 1 + rng.below(2);
  for (std::size_t b = 0; b < bindings; ++b) {
    entries.push_back(container(
        "binding",
        {scalar("name", "binding" + std::to_string(b)),
         scalar("interfaceRef", interface_names[rng.below(interface_names.size())]),
         scalar("protocol", rng.chance(50) ? "http" : "soap")}));
  }
  entries.push_back(container("service", {scalar("endpoint", "http://host:808" +
                                                                 std::to_string(rng.below(10)) +
                                                                 "/svc")}));
  return entries;
}

inline std::vector<ImportLink> random_imports(Rng& rng, const std::string& provider_endpoint) {
  std::vector<ImportLink> imports;
  for (Kind k : {Kind::NonFunctional, Kind::Contextual, Kind::Business, Kind::DataSource,
                 Kind::Collaborator, Kind::Hardware}) {
    if (rng.chance(70)) {
      ImportLink link;
      link.namespace_uri = import_namespace(k);
      link.location = provider_endpoint + "/desc/" + std::string(slot_token(*provider_slot_of(k)));
      if (rng.chance(40)) link.documentation = std::string(kind_token(k)) + " description";
      imports.push_back(std::move(link));
    }
  }
  return imports;
}

/// A random valid document of the given kind.
inline DescriptionDocument random_document(Kind kind, Rng& rng) {
  const ServiceIdentity service = random_service(rng);
  const Instant stamp = rng.instant();
  switch (kind) {
    case Kind::Functional: {
      std::vector<std::string> ops;
      auto entries = random_functional_entries(rng, ops);
      return build_functional(service, random_imports(rng, "http://provider:9000"),
                              std::move(entries));
    }
    case Kind::NonFunctional:
      return build_document(kind, service, random_non_functional_entries(rng), stamp);
    case Kind::Contextual:
      return build_document(kind, service, random_contextual_entries(rng), stamp);
    case Kind::Business:
      return build_document(kind, service, random_business_entries(rng), stamp);
    case Kind::DataSource:
      return build_document(kind, service, random_data_source_entries(rng), stamp);
    case Kind::Collaborator:
      return build_document(kind, service, random_collaborator_entries(rng), stamp);
    case Kind::Hardware:
      return build_document(kind, service, random_hardware_entries(rng), stamp);
    case Kind::ConsumerBase:
      return build_document(kind, service, random_consumer_base_entries(rng), stamp);
  }
  throw std::logic_error("unreachable");
}

} // namespace testgen
