#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "mobidesc/consumer/criteria_json.hpp"
#include "mobidesc/consumer/resolver.hpp"
#include "mobidesc/consumer/select.hpp"
#include "mobidesc/sim/fixtures.hpp"
#include "mobidesc/sim/metrics.hpp"

namespace mobidesc {

struct ChurnEvent {
  DurationMs at{0};
  std::string provider;
  bool online = true;
};

struct ConsumerAction {
  DurationMs at{0};
  std::string action; // find | resolve | refresh | select | consume
  nlohmann::json params;
};

struct GeneratedTicks {
  int count = 0;
  DurationMs period{1000};
};

/// One deterministic scenario: which fixtures to deploy, the context ticks
/// each provider sees (scripted or seeded-random), the churn schedule, and
/// the consumer script, all on one logical clock starting at `base`.
struct ScenarioConfig {
  std::vector<std::string> fixtures;
  std::map<std::string, std::vector<TraceStep>> traces;
  std::map<std::string, GeneratedTicks> generated_ticks;
  std::vector<ChurnEvent> churn;
  std::vector<ConsumerAction> script;
  DurationMs freshness_window{60'000};
  std::uint64_t seed = 0;
  std::int64_t latency_ms_per_hop = 10;
  Instant base = Instant::from_millis(1433160000000);

  static ScenarioConfig from_json(const nlohmann::json& j,
                                  const std::filesystem::path& relative_to = {}) {
    ScenarioConfig config;
    try {
      config.fixtures = j.at("fixtures").get<std::vector<std::string>>();
      if (j.contains("traces")) {
        for (const auto& [provider, value] : j["traces"].items()) {
          if (value.is_string()) {
            const std::filesystem::path path = value.get<std::string>();
            config.traces[provider] =
                load_trace((path.is_absolute() || relative_to.empty())
                               ? path.string()
                               : (relative_to / path).string());
          } else if (value.is_array()) {
            std::vector<TraceStep> steps;
            for (const auto& line : value) steps.push_back(trace_step_from_json(line));
            config.traces[provider] = std::move(steps);
          } else {
            throw ConfigError("trace for " + provider + " must be a path or an array");
          }
        }
      }
      if (j.contains("generatedTicks")) {
        for (const auto& [provider, value] : j["generatedTicks"].items()) {
          GeneratedTicks g;
          g.count = value.at("count").get<int>();
          g.period = DurationMs{value.value("periodMs", std::int64_t{1000})};
          config.generated_ticks[provider] = g;
        }
      }
      if (j.contains("churn")) {
        for (const auto& row : j["churn"]) {
          config.churn.push_back(ChurnEvent{DurationMs{row.at("t").get<std::int64_t>()},
                                            row.at("provider").get<std::string>(),
                                            row.at("online").get<bool>()});
        }
      }
      if (j.contains("consumerScript")) {
        for (const auto& row : j["consumerScript"]) {
          ConsumerAction action;
          action.at = DurationMs{row.at("t").get<std::int64_t>()};
          action.action = row.at("action").get<std::string>();
          action.params = row;
          config.script.push_back(std::move(action));
        }
      }
      if (j.contains("freshnessWindowMs")) {
        config.freshness_window = DurationMs{j["freshnessWindowMs"].get<std::int64_t>()};
      }
      if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("latencyMsPerHop")) {
        config.latency_ms_per_hop = j["latencyMsPerHop"].get<std::int64_t>();
      }
      if (j.contains("baseInstant")) {
        config.base = Instant::parse_iso8601(j["baseInstant"].get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad scenario config: ") + e.what());
    }
    return config;
  }

  static ScenarioConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("scenario " + path.string() + " is not JSON");
    return from_json(j, path.parent_path());
  }
};

namespace scenario_detail {

struct Event {
  DurationMs at{0};
  int category = 0; // trace=1 < churn=2 < consumer=3; ties keep config order
  std::size_t sequence = 0;
  std::string provider;
  std::variant<ContextSnapshot, bool, ConsumerAction> payload;
};

} // namespace scenario_detail

/// Replays a scenario deterministically over loopback transports and asserts
/// the cross-module invariants continuously: every fetched document
/// validates, per-document timestamps are monotone from the consumer's view,
/// and the registry's functional bytes survive every tick untouched.
class ScenarioRunner {
public:
  explicit ScenarioRunner(ScenarioConfig config) : config_(std::move(config)) {}

  MetricsReport run() {
    MetricsReport report;
    report.seed = config_.seed;
    report.base = config_.base.to_iso8601();

    Registry registry;
    LoopbackProviderNetwork network;
    std::map<std::string, std::shared_ptr<ProviderAgent>> agents;
    std::map<std::string, CaseStudy> fixtures;
    std::map<std::string, ServiceSummary> summaries;

    for (const auto& name : config_.fixtures) {
      CaseStudy fixture = load_fixture(name, FixtureOptions{"", config_.base});
      auto agent = std::make_shared<ProviderAgent>(fixture.provider_bundle);
      network.add(fixture.record.provider_endpoint, agent);
      agents[name] = agent;
      registry.publish(fixture.record);
      summaries[name] = ServiceSummary{
          registry_detail::service_id_for(fixture.record.service_name, fixture.record.service_uri),
          fixture.record.service_name, fixture.record.service_uri,
          fixture.record.provider_endpoint};
      fixtures[name] = std::move(fixture);
    }

    TrafficMeter meter;
    LoopbackRegistryClient registry_client(registry, &meter);
    LoopbackProviderClient provider_client(network, &meter);

    std::vector<scenario_detail::Event> events;
    std::size_t sequence = 0;
    for (const auto& [provider, steps] : config_.traces) {
      if (!agents.count(provider)) throw ConfigError("trace for unknown provider " + provider);
      for (const auto& step : steps) {
        scenario_detail::Event e;
        e.at = step.offset;
        e.category = 1;
        e.sequence = sequence++;
        e.provider = provider;
        ContextSnapshot snap = step.snapshot;
        snap.clock = config_.base + step.offset;
        e.payload = snap;
        events.push_back(std::move(e));
      }
    }
    for (const auto& [provider, gen] : config_.generated_ticks) {
      if (!agents.count(provider)) {
        throw ConfigError("generated ticks for unknown provider " + provider);
      }
      SnapshotGenerator generator(config_.seed ^ registry_detail::fnv1a64(provider));
      for (int i = 1; i <= gen.count; ++i) {
        scenario_detail::Event e;
        e.at = DurationMs{gen.period.count() * i};
        e.category = 1;
        e.sequence = sequence++;
        e.provider = provider;
        e.payload = generator.next(config_.base + e.at);
        events.push_back(std::move(e));
      }
    }
    for (const auto& c : config_.churn) {
      if (!agents.count(c.provider)) throw ConfigError("churn for unknown provider " + c.provider);
      scenario_detail::Event e;
      e.at = c.at;
      e.category = 2;
      e.sequence = sequence++;
      e.provider = c.provider;
      e.payload = c.online;
      events.push_back(std::move(e));
    }
    for (const auto& action : config_.script) {
      scenario_detail::Event e;
      e.at = action.at;
      e.category = 3;
      e.sequence = sequence++;
      e.payload = action;
      events.push_back(std::move(e));
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const scenario_detail::Event& a, const scenario_detail::Event& b) {
                       if (a.at != b.at) return a.at < b.at;
                       if (a.category != b.category) return a.category < b.category;
                       return a.sequence < b.sequence;
                     });

    std::map<std::string, ResolvedDescription> resolved_state;
    std::map<std::string, std::map<Kind, Instant>> seen_stamps;

    auto note_violation = [&](bool ok) {
      if (!ok) report.consistency_violations += 1;
    };

    auto audit_resolved = [&](const std::string& name, const ResolvedDescription& r,
                              DurationMs at) {
      std::set<Kind> covered;
      for (const auto& [kind, doc] : r.documents) {
        note_violation(validate(doc.document).valid());
        if (kind == Kind::Functional) {
          note_violation(doc.source == Source::Registry);
        } else if (doc.document.time_stamp) {
          report.freshness_lag_ms[std::string(kind_token(kind))].push_back(
              ((config_.base + at) - *doc.document.time_stamp).count());
          // Provider-sourced stamps only move forward; a registry static-half
          // fallback during an offline window may legitimately be older.
          if (doc.source == Source::Provider) {
            auto& last = seen_stamps[name];
            if (auto it = last.find(kind); it != last.end()) {
              note_violation(*doc.document.time_stamp >= it->second);
            }
            last[kind] = *doc.document.time_stamp;
          }
        }
        covered.insert(kind);
      }
      for (const auto& [kind, reason] : r.missing) covered.insert(kind);
      note_violation(covered.size() == kAllKinds.size());
    };

    for (const auto& event : events) {
      const Instant now = config_.base + event.at;
      provider_client.set_consume_clock(now);
      if (event.category == 1) {
        agents.at(event.provider)->watchdog_tick(std::get<ContextSnapshot>(event.payload));
        continue;
      }
      if (event.category == 2) {
        agents.at(event.provider)->set_online(std::get<bool>(event.payload));
        continue;
      }
      const auto& action = std::get<ConsumerAction>(event.payload);
      const std::uint64_t bytes_before = meter.bytes;
      const std::uint64_t requests_before = meter.requests;
      ActionMetric metric;
      metric.t = event.at.count();
      metric.action = action.action;
      try {
        if (action.action == "find") {
          FindQuery query;
          if (action.params.contains("name")) {
            query.name_substring = action.params["name"].get<std::string>();
          }
          if (action.params.contains("op")) {
            query.operation = action.params["op"].get<std::string>();
          }
          query.limit = action.params.value("limit", 10);
          metric.target = query.name_substring.value_or("") +
                          (query.operation ? ("#" + *query.operation) : "");
          const auto results = registry_client.find(query);
          metric.outcome = "ok:" + std::to_string(results.size());
        } else if (action.action == "resolve") {
          const std::string service = action.params.at("service").get<std::string>();
          metric.target = service;
          const auto it = summaries.find(service);
          if (it == summaries.end()) throw ConfigError("resolve of unknown service " + service);
          ResolvedDescription r = resolve(it->second, registry_client, provider_client, now);
          audit_resolved(service, r, event.at);
          metric.outcome = "ok:" + std::to_string(r.documents.size()) + "/" +
                           std::to_string(r.missing.size());
          resolved_state[service] = std::move(r);
        } else if (action.action == "refresh") {
          const std::string service = action.params.at("service").get<std::string>();
          metric.target = service;
          auto it = resolved_state.find(service);
          if (it == resolved_state.end()) throw ConfigError("refresh before resolve of " + service);
          std::vector<Kind> kinds;
          for (const auto& token : action.params.at("kinds")) {
            const auto kind = kind_from_token(token.get<std::string>());
            if (!kind) throw ConfigError("unknown kind in refresh");
            kinds.push_back(*kind);
          }
          ResolvedDescription r = refresh(it->second, kinds, provider_client, now);
          audit_resolved(service, r, event.at);
          metric.outcome = "ok:" + std::to_string(r.documents.size()) + "/" +
                           std::to_string(r.missing.size());
          it->second = std::move(r);
        } else if (action.action == "select") {
          SelectionCriteria criteria;
          if (action.params.contains("criteria")) {
            criteria = criteria_from_json(action.params["criteria"]);
          }
          criteria.freshness_window = config_.freshness_window;
          if (action.params.contains("criteria") &&
              action.params["criteria"].contains("freshnessWindowMs")) {
            criteria.freshness_window =
                DurationMs{action.params["criteria"]["freshnessWindowMs"].get<std::int64_t>()};
          }
          std::vector<ResolvedDescription> candidates;
          if (action.params.contains("candidates")) {
            for (const auto& name : action.params["candidates"]) {
              auto it = resolved_state.find(name.get<std::string>());
              if (it != resolved_state.end()) candidates.push_back(it->second);
            }
          } else {
            for (const auto& [name, r] : resolved_state) candidates.push_back(r);
          }
          metric.target = std::to_string(candidates.size()) + " candidates";
          const auto ranked = select(candidates, criteria, now);
          SelectionOutcome outcome;
          outcome.t = event.at.count();
          for (const auto& r : ranked) {
            outcome.ranking.emplace_back(r.summary.service_name, r.score);
          }
          report.selections.push_back(std::move(outcome));
          metric.outcome = "ok:" + std::to_string(ranked.size());
        } else if (action.action == "consume") {
          const std::string service = action.params.at("service").get<std::string>();
          metric.target = service;
          const auto it = summaries.find(service);
          if (it == summaries.end()) throw ConfigError("consume of unknown service " + service);
          const auto status = provider_client.consume(
              it->second.provider_endpoint, action.params.value("consumerId", "consumer"));
          metric.outcome = status == ProviderCallStatus::Ok ? "ok" : "error";
        } else {
          throw ConfigError("unknown consumer action '" + action.action + "'");
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        metric.outcome = std::string("error:") + e.what();
      }
      metric.bytes = meter.bytes - bytes_before;
      metric.latency_ms =
          static_cast<std::int64_t>(meter.requests - requests_before) * config_.latency_ms_per_hop;
      report.actions.push_back(std::move(metric));
    }

    // The registry copy must be byte-identical to what was published, no
    // matter how many ticks ran.
    for (const auto& [name, fixture] : fixtures) {
      const FetchResult fetched =
          registry.fetch_document(summaries.at(name).service_id, Slot::Functional);
      note_violation(fetched.status == FetchStatus::Ok &&
                     fetched.body == fixture.record.functional_xml);
    }
    return report;
  }

private:
  ScenarioConfig config_;
};

inline MetricsReport run_scenario(const ScenarioConfig& config) {
  return ScenarioRunner(config).run();
}

} // namespace mobidesc
