#include "doctest.h"

#include "mobidesc/codec/codec.hpp"
#include "support/generators.hpp"

using namespace mobidesc;

namespace {

const Instant kStamp = Instant::from_millis(1433160000000);
const ServiceIdentity kSvc{"SalesmanTracking", "urn:svc:salesman-tracking"};

DescriptionDocument functional_with_imports() {
  std::vector<ImportLink> imports;
  for (Kind k : {Kind::NonFunctional, Kind::Contextual, Kind::Business, Kind::DataSource,
                 Kind::Collaborator, Kind::Hardware}) {
    imports.push_back(ImportLink{import_namespace(k),
                                 "http://provider:9000/desc/" +
                                     std::string(slot_token(*provider_slot_of(k))),
                                 std::nullopt});
  }
  return build_functional(
      kSvc, imports,
      {container("interface",
                 {scalar("name", "TrackingInterface"),
                  container("operation",
                            {scalar("name", "getLocation"), scalar("input", "getLocationRequest"),
                             scalar("output", "getLocationResponse"), scalar("pattern", "in-out")})}),
       container("binding", {scalar("name", "httpBinding"),
                             scalar("interfaceRef", "TrackingInterface"),
                             scalar("protocol", "http")}),
       container("service", {scalar("endpoint", "http://provider:9000/st")})});
}

} // namespace

TEST_CASE("canonical serialization of an empty non-functional document") {
  const DescriptionDocument doc = build_document(Kind::NonFunctional, kSvc, {}, kStamp);
  const WireDocument wire = serialize(doc);
  CHECK(wire.bytes ==
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<nonFunctionalDescription service=\"SalesmanTracking\" "
        "serviceUri=\"urn:svc:salesman-tracking\" timeStamp=\"2015-06-01T12:00:00.000Z\">\n"
        "  <serviceQoS/>\n"
        "  <networkQoS/>\n"
        "  <systemQoS/>\n"
        "  <otherQoS/>\n"
        "</nonFunctionalDescription>\n");
  CHECK(parse(wire) == doc);
}

TEST_CASE("functional documents emit one import element per link") {
  const DescriptionDocument doc = functional_with_imports();
  const WireDocument wire = serialize(doc);
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = wire.bytes.find("<import namespace=", pos)) != std::string::npos) {
    ++count;
    pos += 1;
  }
  CHECK(count == 6);
  CHECK(wire.bytes.find("location=\"http://provider:9000/desc/nonFunctional\"") !=
        std::string::npos);
  CHECK(wire.bytes.find("<documentation/>") != std::string::npos);
}

TEST_CASE("isDynamic flags appear as attributes") {
  const DescriptionDocument doc = build_document(
      Kind::Contextual, kSvc, {container("deviceContext", {scalar("batteryStatus", "80")})},
      kStamp);
  const WireDocument wire = serialize(doc);
  CHECK(wire.bytes.find("<batteryStatus isDynamic=\"true\" unit=\"percent\">80</batteryStatus>") !=
        std::string::npos);
  const DescriptionDocument back = parse(wire);
  CHECK(element_at(back.root, "deviceContext/batteryStatus").is_dynamic);
  CHECK(back == doc);
}

TEST_CASE("serialize rejects invalid documents") {
  DescriptionDocument doc = build_document(Kind::NonFunctional, kSvc, {}, kStamp);
  doc.time_stamp.reset();
  CHECK_THROWS_AS(serialize(doc), InvalidDocument);
}

TEST_CASE("round trip and canonical idempotence over generated documents") {
  testgen::Rng rng(0x5EED);
  for (int i = 0; i < 300; ++i) {
    const Kind kind = kAllKinds[rng.below(kAllKinds.size())];
    const DescriptionDocument doc = testgen::random_document(kind, rng);
    const WireDocument wire = serialize(doc);
    const DescriptionDocument back = parse(wire);
    CAPTURE(wire.bytes);
    CHECK(back == doc);
    CHECK(serialize(back).bytes == wire.bytes);
  }
}

TEST_CASE("import order is preserved") {
  testgen::Rng rng(0x1312);
  for (int i = 0; i < 50; ++i) {
    const DescriptionDocument doc = testgen::random_document(Kind::Functional, rng);
    CHECK(extract_imports(serialize(doc)) == doc.imports);
  }
}

TEST_CASE("extract_imports spec examples") {
  const DescriptionDocument doc = functional_with_imports();
  const auto links = extract_imports(serialize(doc));
  REQUIRE(links.size() == 6);
  CHECK(links[0].namespace_uri == "urn:mobidesc:nonFunctional");
  CHECK(links[5].namespace_uri == "urn:mobidesc:hardware");

  const DescriptionDocument no_imports = build_functional(
      kSvc, {},
      {container("interface", {scalar("name", "I"),
                               container("operation", {scalar("name", "op"), scalar("input", "i"),
                                                       scalar("output", "o"),
                                                       scalar("pattern", "in-out")})}),
       container("binding",
                 {scalar("name", "b"), scalar("interfaceRef", "I"), scalar("protocol", "http")}),
       container("service", {scalar("endpoint", "http://h:1/s")})});
  CHECK(extract_imports(serialize(no_imports)).empty());

  const DescriptionDocument business = build_document(Kind::Business, kSvc, {}, kStamp);
  CHECK_THROWS_AS(extract_imports(serialize(business)), NotFunctional);
}

TEST_CASE("parse rejects a missing service attribute") {
  const std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<businessDescription serviceUri=\"urn:svc:x\" timeStamp=\"2015-06-01T12:00:00.000Z\"/>\n";
  CHECK_THROWS_AS(parse(xml), SchemaViolation);
}

TEST_CASE("parse rejects an unparsable timestamp") {
  const std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<businessDescription service=\"S\" serviceUri=\"urn:svc:x\" timeStamp=\"not-a-date\"/>\n";
  CHECK_THROWS_AS(parse(xml), BadTimestamp);
}

TEST_CASE("parse rejects malformed XML") {
  CHECK_THROWS_AS(parse("<businessDescription service=\"S\""), MalformedXml);
  CHECK_THROWS_AS(parse("no xml at all"), MalformedXml);
  CHECK_THROWS_AS(parse("<a><b></a></b>"), MalformedXml);
}

TEST_CASE("parse rejects unknown elements outside extensible groups") {
  const std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<nonFunctionalDescription service=\"S\" serviceUri=\"urn:svc:x\" "
      "timeStamp=\"2015-06-01T12:00:00.000Z\">\n"
      "  <serviceQoS>\n"
      "    <madeUp>1</madeUp>\n"
      "  </serviceQoS>\n"
      "</nonFunctionalDescription>\n";
  CHECK_THROWS_AS(parse(xml), SchemaViolation);
}

TEST_CASE("parse preserves unknown elements under extensible groups") {
  const std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<nonFunctionalDescription service=\"S\" serviceUri=\"urn:svc:x\" "
      "timeStamp=\"2015-06-01T12:00:00.000Z\">\n"
      "  <otherQoS>\n"
      "    <auditability>high</auditability>\n"
      "  </otherQoS>\n"
      "</nonFunctionalDescription>\n";
  const DescriptionDocument doc = parse(xml);
  CHECK(element_at(doc.root, "otherQoS/auditability").value == "high");
}

TEST_CASE("serializing a subset document yields strictly fewer bytes") {
  testgen::Rng rng(0xACE);
  for (int i = 0; i < 100; ++i) {
    const Kind kind = kAllKinds[rng.below(kAllKinds.size())];
    DescriptionDocument doc = testgen::random_document(kind, rng);
    // Drop one leaf to get a strict subset of entries.
    ElementNode* victim_parent = nullptr;
    for (auto& g : doc.root.children) {
      if (!g.children.empty()) {
        victim_parent = &g;
        break;
      }
    }
    if (!victim_parent && doc.kind != Kind::Functional) continue;
    if (!victim_parent) continue;
    DescriptionDocument subset = doc;
    subset.root.child(victim_parent->name)->children.pop_back();
    if (!validate(subset).valid()) continue; // e.g. dropped a required functional child
    CHECK(serialize(subset).bytes.size() < serialize(doc).bytes.size());
  }
}
