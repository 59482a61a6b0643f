#include "doctest.h"

#include <optional>
#include <set>

#include "mobidesc/provider/agent.hpp"
#include "mobidesc/sim/fixtures.hpp"
#include "support/generators.hpp"

using namespace mobidesc;

namespace {

const Instant kBase = Instant::from_millis(1433160000000);

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

std::set<Slot> slots_of(const std::vector<UpdateEvent>& updates) {
  std::set<Slot> slots;
  for (const auto& u : updates) slots.insert(u.slot);
  return slots;
}

// Independent re-derivation of which documents one tick must update: the
// field-to-document mapping applied to the snapshot diff, plus the
// collaborator refresh timer.
class WatchdogOracle {
public:
  WatchdogOracle(std::set<Slot> hosted, std::optional<DurationMs> collab_period,
                 Instant collab_stamp)
      : hosted_(std::move(hosted)), period_(collab_period), last_collab_(collab_stamp) {}

  std::set<Slot> expected(const ContextSnapshot& snap) {
    const bool first = !last_.has_value();
    const bool battery = first || snap.battery_percent != last_->battery_percent;
    const bool charging = first || snap.charging != last_->charging;
    const bool network = first || snap.network_type != last_->network_type;
    const bool gps = first || !(snap.gps == last_->gps);
    const bool memory = first || snap.free_memory_mb != last_->free_memory_mb;
    const bool presence = first || snap.user_presence != last_->user_presence;
    std::set<Slot> expected;
    if (battery || charging || network || gps || presence) expected.insert(Slot::Contextual);
    if (network) expected.insert(Slot::NonFunctional);
    if (gps) expected.insert(Slot::DataSourceDynamic);
    if (battery || charging || memory) expected.insert(Slot::HardwareDynamic);
    if (period_ && snap.clock - last_collab_ >= *period_) {
      expected.insert(Slot::Collaborator);
      last_collab_ = snap.clock;
    }
    std::set<Slot> hosted_expected;
    for (Slot s : expected) {
      if (hosted_.count(s)) hosted_expected.insert(s);
    }
    last_ = snap;
    return hosted_expected;
  }

private:
  std::set<Slot> hosted_;
  std::optional<DurationMs> period_;
  Instant last_collab_;
  std::optional<ContextSnapshot> last_;
};

ContextSnapshot random_snapshot(testgen::Rng& rng, Instant clock) {
  ContextSnapshot s;
  s.battery_percent = static_cast<int>(rng.below(4)) * 20; // coarse so repeats happen
  s.charging = rng.chance(30);
  constexpr NetworkType nets[] = {NetworkType::WiFi, NetworkType::GSM, NetworkType::WiMAX,
                                  NetworkType::None};
  s.network_type = nets[rng.below(4)];
  s.gps = GpsPoint{20.0 + static_cast<double>(rng.below(3)), 75.0};
  s.free_memory_mb = static_cast<long long>(rng.below(3)) * 256;
  constexpr UserPresence states[] = {UserPresence::Available, UserPresence::Busy,
                                     UserPresence::Away};
  s.user_presence = states[rng.below(3)];
  s.clock = clock;
  return s;
}

} // namespace

TEST_CASE("hosted documents are served as canonical bytes") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  CHECK(agent.online());
  const DocResult result = agent.get_document(Slot::Contextual);
  REQUIRE(result.status == DocStatus::Ok);
  CHECK(parse(result.body) == fixture.provider_bundle.documents.at(Slot::Contextual));
}

TEST_CASE("a bundle with a mismatched service identity is rejected") {
  CaseStudy fixture = load_fixture("SalesmanTracking");
  fixture.provider_bundle.documents.at(Slot::Business).service.name = "SomeoneElse";
  CHECK_THROWS_AS(ProviderAgent{fixture.provider_bundle}, InvalidBundle);
}

TEST_CASE("a manual service without data-source documents is accepted") {
  const CaseStudy fixture = load_fixture("CarPoolingMate");
  CHECK(fixture.provider_bundle.documents.count(Slot::DataSourceDynamic) == 0);
  ProviderAgent agent(fixture.provider_bundle);
  CHECK(agent.get_document(Slot::DataSourceDynamic).status == DocStatus::NotHosted);
}

TEST_CASE("registry-resident slots cannot be hosted") {
  CaseStudy fixture = load_fixture("SalesmanTracking");
  fixture.provider_bundle.documents.emplace(
      Slot::Functional, parse(fixture.record.functional_xml));
  CHECK_THROWS_AS(ProviderAgent{fixture.provider_bundle}, InvalidBundle);
}

TEST_CASE("offline agents serve nothing but still tick") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  agent.set_online(false);
  agent.set_online(false); // idempotent
  CHECK(agent.get_document(Slot::Contextual).status == DocStatus::Offline);
  auto snap = baseline(kBase + DurationMs{1000});
  CHECK_FALSE(agent.watchdog_tick(snap).empty()); // first tick refreshes baselines
  agent.set_online(true);
  const DocResult result = agent.get_document(Slot::Contextual);
  REQUIRE(result.status == DocStatus::Ok);
  CHECK(parse(result.body).time_stamp == snap.clock);
}

TEST_CASE("battery change updates contextual and hardware-dynamic only") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  agent.watchdog_tick(baseline(kBase + DurationMs{1000}));
  const auto business_before = agent.document(Slot::Business)->document.time_stamp;
  const auto nonfunctional_before = agent.document(Slot::NonFunctional)->document.time_stamp;

  auto snap = baseline(kBase + DurationMs{2000});
  snap.battery_percent = 60;
  const auto updates = agent.watchdog_tick(snap);
  CHECK(slots_of(updates) == std::set<Slot>{Slot::Contextual, Slot::HardwareDynamic});
  for (const auto& u : updates) CHECK(u.time_stamp == snap.clock);

  CHECK(agent.document(Slot::Business)->document.time_stamp == business_before);
  CHECK(agent.document(Slot::NonFunctional)->document.time_stamp == nonfunctional_before);
  const auto& contextual = agent.document(Slot::Contextual)->document;
  CHECK(element_at(contextual.root, "deviceContext/batteryStatus").value == "60");
  const auto& hardware = agent.document(Slot::HardwareDynamic)->document;
  CHECK(element_at(hardware.root, "powerDetail/batteryPercent").value == "60");
  CHECK(element_at(hardware.root, "powerDetail/estimatedRuntimeMinutes").value == "360");
}

TEST_CASE("identical consecutive snapshots update nothing") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  agent.watchdog_tick(baseline(kBase + DurationMs{1000}));
  CHECK(agent.watchdog_tick(baseline(kBase + DurationMs{2000})).empty());
}

TEST_CASE("gps change updates contextual and the hosted data-source half") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  agent.watchdog_tick(baseline(kBase + DurationMs{1000}));
  auto snap = baseline(kBase + DurationMs{2000});
  snap.gps = GpsPoint{22.9, 75.9};
  const auto updates = agent.watchdog_tick(snap);
  CHECK(slots_of(updates) == std::set<Slot>{Slot::Contextual, Slot::DataSourceDynamic});
  const auto& ds = agent.document(Slot::DataSourceDynamic)->document;
  CHECK(element_at(ds.root, "locationDetail/gpsCoordinates/latitude").value == "22.9");
}

TEST_CASE("gps change on a service without data-source documents updates contextual only") {
  const CaseStudy fixture = load_fixture("CarPoolingMate");
  ProviderAgent agent(fixture.provider_bundle);
  agent.watchdog_tick(baseline(kBase + DurationMs{1000}));
  auto snap = baseline(kBase + DurationMs{2000});
  snap.gps = GpsPoint{23.0, 76.0};
  CHECK(slots_of(agent.watchdog_tick(snap)) == std::set<Slot>{Slot::Contextual});
}

TEST_CASE("network change retiers bandwidthCapability in the non-functional document") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  agent.watchdog_tick(baseline(kBase + DurationMs{1000}));
  auto snap = baseline(kBase + DurationMs{2000});
  snap.network_type = NetworkType::GSM;
  const auto updates = agent.watchdog_tick(snap);
  CHECK(slots_of(updates) == std::set<Slot>{Slot::Contextual, Slot::NonFunctional});
  const auto& nf = agent.document(Slot::NonFunctional)->document;
  CHECK(element_at(nf.root, "networkQoS/bandwidthCapability").value == "low");
}

TEST_CASE("snapshot clocks may not move backwards") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  agent.watchdog_tick(baseline(kBase + DurationMs{2000}));
  CHECK_THROWS_AS(agent.watchdog_tick(baseline(kBase + DurationMs{1000})), ClockSkew);
}

TEST_CASE("collaborator entries refresh on their declared frequency") {
  const CaseStudy fixture = load_fixture("SalesmanTracking"); // updateFrequency 300 s
  ProviderAgent agent(fixture.provider_bundle);
  auto first = agent.watchdog_tick(baseline(kBase + DurationMs{1000}));
  CHECK_FALSE(slots_of(first).count(Slot::Collaborator)); // 1 s < 300 s
  auto later = baseline(kBase + DurationMs{301'000});
  const auto updates = agent.watchdog_tick(later);
  CHECK(slots_of(updates) == std::set<Slot>{Slot::Collaborator});
  CHECK(agent.document(Slot::Collaborator)->document.time_stamp == later.clock);
}

TEST_CASE("timestamps are monotone and updates match the oracle over random ticks") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  std::set<Slot> hosted;
  for (Slot s : agent.hosted_slots()) hosted.insert(s);
  WatchdogOracle oracle(hosted, DurationMs{300'000},
                        *fixture.provider_bundle.documents.at(Slot::Collaborator).time_stamp);

  testgen::Rng rng(0xF00D);
  std::map<Slot, Instant> last_stamp;
  Instant clock = kBase;
  for (int i = 0; i < 2000; ++i) {
    clock = clock + DurationMs{1 + static_cast<std::int64_t>(rng.below(5000))};
    const ContextSnapshot snap = random_snapshot(rng, clock);
    const auto updates = agent.watchdog_tick(snap);
    CHECK(slots_of(updates) == oracle.expected(snap));
    for (Slot slot : hosted) {
      const auto stamp = agent.document(slot)->document.time_stamp;
      REQUIRE(stamp.has_value());
      if (auto it = last_stamp.find(slot); it != last_stamp.end()) CHECK(*stamp >= it->second);
      last_stamp[slot] = *stamp;
    }
    // Spot-check derived content against the snapshot.
    const auto& contextual = agent.document(Slot::Contextual)->document;
    CHECK(element_at(contextual.root, "deviceContext/batteryStatus").value ==
          std::to_string(snap.battery_percent));
    CHECK(element_at(contextual.root, "userContext/presence").value ==
          std::string(to_string(snap.user_presence)));
  }
}

TEST_CASE("consumption updates the consumer base") {
  const CaseStudy fixture = load_fixture("SalesmanTracking");
  ProviderAgent agent(fixture.provider_bundle);
  const Instant t1 = kBase + DurationMs{1000};
  const Instant t2 = kBase + DurationMs{2000};
  agent.record_consumption("c1", t1);
  const DescriptionDocument after = agent.record_consumption("c1", t2);
  const ElementNode* c1 = nullptr;
  std::size_t entries = 0;
  for (const auto& c : after.root.children) {
    if (c.name != "consumer") continue;
    ++entries;
    if (c.child("identity")->value == "c1") c1 = &c;
  }
  REQUIRE(c1);
  CHECK(entries == 2); // seed consumer + c1
  CHECK(c1->child("invocationCount")->value == "2");
  CHECK(c1->child("lastInvocation")->value == t2.to_iso8601());

  const DescriptionDocument more = agent.record_consumption("c2", kBase + DurationMs{3000});
  std::size_t after_entries = 0;
  for (const auto& c : more.root.children) {
    if (c.name == "consumer") ++after_entries;
  }
  CHECK(after_entries == 3);
  CHECK(validate(more).valid());
}

TEST_CASE("recording consumption without a consumer base is an error") {
  CaseStudy fixture = load_fixture("CarPoolingMate");
  fixture.provider_bundle.documents.erase(Slot::ConsumerBase);
  ProviderAgent agent(fixture.provider_bundle);
  CHECK_THROWS_AS(agent.record_consumption("c1", kBase), NotHostedError);
}
