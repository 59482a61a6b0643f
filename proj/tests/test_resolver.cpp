#include "doctest.h"

#include <memory>
#include <set>

#include "mobidesc/consumer/resolver.hpp"
#include "mobidesc/sim/fixtures.hpp"

using namespace mobidesc;

namespace {

const Instant kBase = Instant::from_millis(1433160000000);

struct Loopback {
  Registry registry;
  LoopbackProviderNetwork network;
  TrafficMeter meter;
  std::unique_ptr<LoopbackRegistryClient> registry_client;
  std::unique_ptr<LoopbackProviderClient> provider_client;
  std::map<std::string, std::shared_ptr<ProviderAgent>> agents;

  Loopback() {
    registry_client = std::make_unique<LoopbackRegistryClient>(registry, &meter);
    provider_client = std::make_unique<LoopbackProviderClient>(network, &meter);
  }

  ServiceSummary deploy(const std::string& name) {
    const CaseStudy fixture = load_fixture(name);
    auto agent = std::make_shared<ProviderAgent>(fixture.provider_bundle);
    network.add(fixture.record.provider_endpoint, agent);
    agents[name] = agent;
    const std::string id = registry.publish(fixture.record);
    return registry.find(FindQuery{fixture.record.service_name, std::nullopt, 1}).at(0);
  }
};

void check_totality(const ResolvedDescription& resolved) {
  std::set<Kind> covered;
  for (const auto& [kind, doc] : resolved.documents) covered.insert(kind);
  for (const auto& [kind, reason] : resolved.missing) {
    CHECK(covered.count(kind) == 0); // never both present and missing
    covered.insert(kind);
  }
  CHECK(covered.size() == kAllKinds.size());
}

ContextSnapshot baseline(Instant clock) {
  ContextSnapshot s;
  s.battery_percent = 80;
  s.charging = false;
  s.network_type = NetworkType::WiFi;
  s.gps = GpsPoint{22.7196, 75.8577};
  s.free_memory_mb = 512;
  s.user_presence = UserPresence::Available;
  s.clock = clock;
  return s;
}

} // namespace

TEST_CASE("resolving SalesmanTracking assembles all eight kinds") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase + DurationMs{1000});
  CHECK(resolved.missing.empty());
  CHECK(resolved.documents.size() == 8);
  check_totality(resolved);

  CHECK(resolved.document(Kind::Functional)->source == Source::Registry);
  for (Kind kind : kAllKinds) {
    if (kind == Kind::Functional) continue;
    REQUIRE(resolved.document(kind));
    CHECK(resolved.document(kind)->source == Source::Provider);
    CHECK(validate(resolved.document(kind)->document).valid());
  }
  // Split kinds carry both halves after the merge.
  const auto& hardware = resolved.document(Kind::Hardware)->document;
  for (const char* group : {"sensorList", "manufacturerDetail", "memoryDetail", "powerDetail"}) {
    CHECK(group_populated(hardware, group));
  }
  const auto& data_source = resolved.document(Kind::DataSource)->document;
  for (const char* group : {"locationDetail", "capacityDetail", "qosDetail", "contextualDetail"}) {
    CHECK(group_populated(data_source, group));
  }
}

TEST_CASE("resolving with the provider offline keeps functional and static halves") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");
  env.agents["SalesmanTracking"]->set_online(false);
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase + DurationMs{1000});
  check_totality(resolved);
  CHECK(resolved.document(Kind::Functional));
  REQUIRE(resolved.document(Kind::Hardware));
  CHECK(resolved.document(Kind::Hardware)->source == Source::Registry); // static half only
  CHECK(group_populated(resolved.document(Kind::Hardware)->document, "sensorList"));
  CHECK_FALSE(group_populated(resolved.document(Kind::Hardware)->document, "powerDetail"));
  for (Kind kind : {Kind::NonFunctional, Kind::Contextual, Kind::Business, Kind::Collaborator,
                    Kind::ConsumerBase}) {
    CHECK(resolved.miss_reason(kind) == MissReason::Offline);
  }
}

TEST_CASE("a manual service resolves without data source and collaborator") {
  Loopback env;
  const ServiceSummary summary = env.deploy("CarPoolingMate");
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase + DurationMs{1000});
  check_totality(resolved);
  CHECK(resolved.documents.size() == 6);
  CHECK(resolved.miss_reason(Kind::DataSource) == MissReason::NotHosted);
  CHECK(resolved.miss_reason(Kind::Collaborator) == MissReason::NotHosted);
}

TEST_CASE("an unreachable import location is reported as a broken link") {
  Loopback env;
  ServiceSummary summary = env.deploy("SalesmanTracking");
  // Point the contextual import at an endpoint that is not deployed.
  CaseStudy fixture = load_fixture("SalesmanTracking");
  DescriptionDocument functional = parse(fixture.record.functional_xml);
  for (auto& link : functional.imports) {
    if (link.namespace_uri == import_namespace(Kind::Contextual)) {
      link.location = "loop://ghost/desc/contextual";
    }
  }
  fixture.record.functional_xml = serialize(functional).bytes;
  env.registry.publish(fixture.record);
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase + DurationMs{1000});
  check_totality(resolved);
  CHECK(resolved.miss_reason(Kind::Contextual) == MissReason::LinkBroken);
  CHECK(resolved.document(Kind::NonFunctional)); // other links still resolve
}

TEST_CASE("resolve aborts only for registry-side failures") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");
  ServiceSummary unknown = summary;
  unknown.service_id = "svc-0000000000000000";
  CHECK_THROWS_AS(
      resolve(unknown, *env.registry_client, *env.provider_client, kBase + DurationMs{1000}),
      FunctionalMissing);
}

TEST_CASE("merge_split unions halves with the dynamic side winning") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  const DescriptionDocument hardware_static = parse(*fixture.record.hardware_static_xml);
  const DescriptionDocument hardware_dynamic =
      fixture.provider_bundle.documents.at(Slot::HardwareDynamic);

  const DescriptionDocument merged = merge_split(hardware_static, hardware_dynamic);
  CHECK(merged.root.children.size() == 4);
  CHECK(merged.time_stamp == hardware_dynamic.time_stamp);
  CHECK(group_populated(merged, "sensorList"));
  CHECK(group_populated(merged, "powerDetail"));
  CHECK(validate(merged).valid());

  // Static half + empty dynamic half: static entries, dynamic timestamp.
  DescriptionDocument empty_dynamic = hardware_dynamic;
  empty_dynamic.root.children.clear();
  empty_dynamic.time_stamp = kBase + DurationMs{5000};
  const DescriptionDocument merged2 = merge_split(hardware_static, empty_dynamic);
  CHECK(group_populated(merged2, "sensorList"));
  CHECK(merged2.time_stamp == kBase + DurationMs{5000});

  // A group present in both halves keeps the dynamic copy wholesale.
  DescriptionDocument clashing_static = hardware_static;
  clashing_static.root.children.push_back(
      container("powerDetail", {scalar("batteryPercent", "1")}));
  const DescriptionDocument merged3 = merge_split(clashing_static, hardware_dynamic);
  CHECK(element_at(merged3.root, "powerDetail/batteryPercent").value == "80");
}

TEST_CASE("merge_split rejects mismatched halves") {
  const CaseStudy st = load_fixture("SalesmanTracking");
  const CaseStudy mlo = load_fixture("MallLatestOffer");
  const DescriptionDocument hw_static = parse(*st.record.hardware_static_xml);
  const DescriptionDocument ds_dynamic =
      st.provider_bundle.documents.at(Slot::DataSourceDynamic);
  CHECK_THROWS_AS(merge_split(hw_static, ds_dynamic), KindMismatch);
  const DescriptionDocument other_service =
      mlo.provider_bundle.documents.at(Slot::HardwareDynamic);
  CHECK_THROWS_AS(merge_split(hw_static, other_service), ServiceMismatch);
  const DescriptionDocument contextual = st.provider_bundle.documents.at(Slot::Contextual);
  CHECK_THROWS_AS(merge_split(contextual, contextual), KindMismatch);
}

TEST_CASE("staleness ages every timestamped document") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase);
  // Documents are stamped at kBase by the fixture.
  const StalenessReport fresh = staleness(resolved, kBase + DurationMs{5000}, DurationMs{10'000});
  CHECK(fresh.per_document.count(Kind::Functional) == 0);
  REQUIRE(fresh.per_document.count(Kind::Contextual) == 1);
  CHECK(fresh.per_document.at(Kind::Contextual).age == DurationMs{5000});
  CHECK_FALSE(fresh.per_document.at(Kind::Contextual).stale);

  const StalenessReport stale = staleness(resolved, kBase + DurationMs{11'000}, DurationMs{10'000});
  CHECK(stale.per_document.at(Kind::Contextual).stale);

  CHECK_THROWS_AS(staleness(resolved, kBase - DurationMs{1000}, DurationMs{10'000}), ClockSkew);
}

TEST_CASE("refresh observes watchdog updates without touching other kinds") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase + DurationMs{1000});
  const Instant old_stamp = *resolved.document(Kind::Contextual)->document.time_stamp;

  auto& agent = *env.agents["SalesmanTracking"];
  agent.watchdog_tick(baseline(kBase + DurationMs{2000}));
  auto snap = baseline(kBase + DurationMs{3000});
  snap.battery_percent = 55;
  agent.watchdog_tick(snap);

  const ResolvedDescription refreshed =
      refresh(resolved, {Kind::Contextual}, *env.provider_client, kBase + DurationMs{4000});
  check_totality(refreshed);
  const Instant new_stamp = *refreshed.document(Kind::Contextual)->document.time_stamp;
  CHECK(new_stamp > old_stamp);
  CHECK(new_stamp == snap.clock);
  CHECK(element_at(refreshed.document(Kind::Contextual)->document.root,
                   "deviceContext/batteryStatus")
            .value == "55");
  // Untouched kinds keep their original fetch.
  CHECK(refreshed.document(Kind::Business)->document ==
        resolved.document(Kind::Business)->document);
  CHECK(refreshed.document(Kind::Business)->fetched_at ==
        resolved.document(Kind::Business)->fetched_at);

  // Refreshing nothing changes nothing.
  const ResolvedDescription same =
      refresh(resolved, {}, *env.provider_client, kBase + DurationMs{4000});
  CHECK(same.documents == resolved.documents);

  // A refreshed split kind re-merges with the static half already held.
  const ResolvedDescription hw =
      refresh(resolved, {Kind::Hardware}, *env.provider_client, kBase + DurationMs{4000});
  CHECK(group_populated(hw.document(Kind::Hardware)->document, "sensorList"));
  CHECK(element_at(hw.document(Kind::Hardware)->document.root, "powerDetail/batteryPercent")
            .value == "55");
}

TEST_CASE("refresh while offline moves kinds to missing") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");
  const ResolvedDescription resolved =
      resolve(summary, *env.registry_client, *env.provider_client, kBase + DurationMs{1000});
  env.agents["SalesmanTracking"]->set_online(false);
  const ResolvedDescription refreshed = refresh(resolved, {Kind::Contextual, Kind::Hardware},
                                                *env.provider_client, kBase + DurationMs{2000});
  check_totality(refreshed);
  CHECK(refreshed.miss_reason(Kind::Contextual) == MissReason::Offline);
  CHECK(refreshed.miss_reason(Kind::Hardware) == MissReason::Offline);
  CHECK_THROWS_AS(
      refresh(resolved, {Kind::Functional}, *env.provider_client, kBase + DurationMs{2000}),
      InvalidQuery);
}

TEST_CASE("a single-document refresh moves fewer wire bytes than a full resolve") {
  Loopback env;
  const ServiceSummary summary = env.deploy("SalesmanTracking");

  TrafficMeter resolve_meter;
  LoopbackRegistryClient rc(env.registry, &resolve_meter);
  LoopbackProviderClient pc(env.network, &resolve_meter);
  const ResolvedDescription resolved = resolve(summary, rc, pc, kBase + DurationMs{1000});
  const std::uint64_t resolve_bytes = resolve_meter.bytes;

  TrafficMeter refresh_meter;
  LoopbackProviderClient refresh_pc(env.network, &refresh_meter);
  refresh(resolved, {Kind::Contextual}, refresh_pc, kBase + DurationMs{2000});
  const std::uint64_t refresh_bytes = refresh_meter.bytes;

  CHECK(refresh_bytes > 0);
  CHECK(refresh_bytes < resolve_bytes);
}
