// mobidesc — partitioned mobile service descriptions: registry and provider
// daemons, the consumer-side resolve/select verbs, the scenario runner, and
// the case-study conformance check.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "mobidesc/consumer/criteria_json.hpp"
#include "mobidesc/consumer/resolver.hpp"
#include "mobidesc/consumer/select.hpp"
#include "mobidesc/net/http.hpp"
#include "mobidesc/sim/conformance.hpp"
#include "mobidesc/sim/scenario.hpp"

using namespace mobidesc;

namespace {

std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--listen expects host:port");
  return {listen.substr(0, colon), std::atoi(listen.c_str() + colon + 1)};
}

volatile std::sig_atomic_t g_stop = 0;

void wait_for_signal() {
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

nlohmann::ordered_json resolved_to_json(const ResolvedDescription& r, Instant now,
                                        DurationMs window) {
  nlohmann::ordered_json j;
  j["service"] = wire_json::summary_to_json(r.summary);
  j["documents"] = nlohmann::ordered_json::object();
  const StalenessReport ages = staleness(r, now, window);
  for (const auto& [kind, doc] : r.documents) {
    nlohmann::ordered_json entry;
    entry["source"] = std::string(to_string(doc.source));
    if (doc.document.time_stamp) entry["timeStamp"] = doc.document.time_stamp->to_iso8601();
    entry["fetchedAt"] = doc.fetched_at.to_iso8601();
    if (auto it = ages.per_document.find(kind); it != ages.per_document.end()) {
      entry["ageMs"] = it->second.age.count();
      entry["stale"] = it->second.stale;
    }
    j["documents"][std::string(kind_token(kind))] = std::move(entry);
  }
  j["missing"] = nlohmann::ordered_json::object();
  for (const auto& [kind, reason] : r.missing) {
    j["missing"][std::string(kind_token(kind))] = std::string(to_string(reason));
  }
  return j;
}

int run_registry(const std::string& listen, const std::string& journal) {
  auto [host, port] = split_listen(listen);
  Registry registry = journal.empty() ? Registry() : Registry(std::filesystem::path(journal));
  RegistryServer server(registry);
  const int bound = server.start(host, port);
  std::printf("registry listening on %s:%d%s%s\n", host.c_str(), bound,
              journal.empty() ? "" : ", journal at ", journal.c_str());
  wait_for_signal();
  server.stop();
  return 0;
}

int run_provider(const std::string& listen, const std::string& bundle_dir,
                 const std::string& fixture_name, const std::string& trace_path) {
  auto [host, port] = split_listen(listen);
  ServiceBundle bundle;
  if (!bundle_dir.empty()) {
    bundle = load_bundle_dir(bundle_dir);
  } else if (!fixture_name.empty()) {
    bundle = load_fixture(fixture_name, FixtureOptions{"http://" + listen, wall_clock_now()})
                 .provider_bundle;
  } else {
    throw ConfigError("provider needs --bundle or --fixture");
  }
  auto agent = std::make_shared<ProviderAgent>(bundle);
  ProviderServer server(agent);
  const int bound = server.start(host, port);
  std::printf("provider for %s listening on %s:%d\n", bundle.service.name.c_str(), host.c_str(),
              bound);

  std::thread watchdog;
  if (!trace_path.empty()) {
    auto steps = load_trace(trace_path);
    watchdog = std::thread([agent, steps = std::move(steps)] {
      const Instant start = wall_clock_now();
      for (const auto& step : steps) {
        while (!g_stop && wall_clock_now() - start < step.offset) {
          std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        if (g_stop) return;
        ContextSnapshot snap = step.snapshot;
        snap.clock = wall_clock_now();
        const auto updates = agent->watchdog_tick(snap);
        for (const auto& u : updates) {
          std::printf("watchdog updated %s at %s\n", std::string(slot_token(u.slot)).c_str(),
                      u.time_stamp.to_iso8601().c_str());
        }
      }
    });
  }
  wait_for_signal();
  server.stop();
  if (watchdog.joinable()) watchdog.join();
  return 0;
}

int run_resolve(const std::string& registry_url, const std::string& query,
                const std::string& op, int limit, std::int64_t window_ms,
                const std::string& out_path) {
  HttpRegistryClient registry(registry_url);
  HttpProviderClient provider;
  FindQuery q;
  if (!query.empty() || op.empty()) q.name_substring = query;
  if (!op.empty()) q.operation = op;
  q.limit = limit;
  const auto found = registry.find(q);
  const Instant now = wall_clock_now();
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& summary : found) {
    try {
      const ResolvedDescription r = resolve(summary, registry, provider, now);
      out.push_back(resolved_to_json(r, now, DurationMs{window_ms}));
    } catch (const Error& e) {
      nlohmann::ordered_json failure;
      failure["service"] = wire_json::summary_to_json(summary);
      failure["error"] = e.what();
      out.push_back(std::move(failure));
    }
  }
  const std::string text = out.dump(2);
  if (out_path.empty()) {
    std::printf("%s\n", text.c_str());
  } else {
    std::ofstream file(out_path, std::ios::binary);
    file << text << '\n';
    if (!file) throw IoError("cannot write " + out_path);
  }
  return found.empty() ? 1 : 0;
}

int run_select(const std::string& criteria_path) {
  std::ifstream in(criteria_path);
  if (!in) throw IoError("cannot open " + criteria_path);
  nlohmann::json spec = nlohmann::json::parse(in, nullptr, false);
  if (spec.is_discarded()) throw ConfigError(criteria_path + " is not JSON");

  const std::string registry_url = spec.at("registry").get<std::string>();
  HttpRegistryClient registry(registry_url);
  HttpProviderClient provider;
  FindQuery query;
  if (spec.contains("query")) {
    const auto& q = spec["query"];
    if (q.contains("name")) query.name_substring = q["name"].get<std::string>();
    if (q.contains("op")) query.operation = q["op"].get<std::string>();
    query.limit = q.value("limit", 10);
  } else {
    query.name_substring = "";
  }
  const SelectionCriteria criteria = criteria_from_json(spec.value("criteria", nlohmann::json::object()));

  const Instant now = wall_clock_now();
  std::vector<ResolvedDescription> candidates;
  for (const auto& summary : registry.find(query)) {
    try {
      candidates.push_back(resolve(summary, registry, provider, now));
    } catch (const Error&) {
      // Unusable candidates simply do not compete.
    }
  }
  const auto ranked = select(candidates, criteria, now);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : ranked) {
    nlohmann::ordered_json row;
    row["serviceName"] = r.summary.service_name;
    row["serviceId"] = r.summary.service_id;
    row["score"] = r.score;
    out.push_back(std::move(row));
  }
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int run_publish(const std::string& registry_url, const std::string& fixture_name,
                const std::string& endpoint) {
  const CaseStudy fixture =
      load_fixture(fixture_name, FixtureOptions{endpoint, wall_clock_now()});
  HttpRegistryClient registry(registry_url);
  PublishRequest record = fixture.record;
  record.publish_instant = wall_clock_now();
  const std::string id = registry.publish(record);
  std::printf("published %s as %s\n", fixture_name.c_str(), id.c_str());
  return 0;
}

int run_sim(const std::string& config_path, std::uint64_t seed, bool seed_set,
            const std::string& out_path, const std::string& csv_path) {
  ScenarioConfig config = ScenarioConfig::load(config_path);
  if (seed_set) config.seed = seed;
  const MetricsReport report = run_scenario(config);
  if (!out_path.empty()) emit_metrics(report, out_path, MetricsFormat::Json);
  if (!csv_path.empty()) emit_metrics(report, csv_path, MetricsFormat::Csv);
  std::printf("scenario complete: %zu actions, %zu selections, %llu consistency violations\n",
              report.actions.size(), report.selections.size(),
              static_cast<unsigned long long>(report.consistency_violations));
  if (out_path.empty() && csv_path.empty()) std::printf("%s\n", report.to_json().dump(2).c_str());
  return report.consistency_violations == 0 ? 0 : 1;
}

int run_conformance(const std::string& fixture_name, const std::string& profile_name) {
  std::vector<std::string> names;
  if (fixture_name == "all") {
    names = fixture_names();
  } else {
    names.push_back(fixture_name);
  }
  bool all_conformant = true;
  for (const auto& name : names) {
    const CaseStudy fixture = load_fixture(name);
    ServiceClass profile_class = fixture.service_class;
    if (!profile_name.empty()) {
      const auto parsed = service_class_from_string(profile_name);
      if (!parsed) throw ConfigError("unknown profile '" + profile_name + "'");
      profile_class = *parsed;
    }
    const ConformanceReport report = verify_coverage(fixture, requirement_profile(profile_class));
    std::printf("%s against %s profile: %s\n", name.c_str(),
                std::string(to_string(profile_class)).c_str(),
                report.conformant ? "conformant" : "NON-CONFORMANT");
    for (const auto& cell : report.cells) {
      std::printf("  %-28s %-20s required=%s present=%s%s\n", cell.section.c_str(),
                  cell.label.c_str(), cell.required ? "yes" : "no ",
                  cell.present ? "yes" : "no ",
                  cell.required && !cell.present ? "  <-- missing" : "");
    }
    all_conformant = all_conformant && report.conformant;
  }
  return all_conformant ? 0 : 1;
}

int run_fixture_emit(const std::string& name, const std::string& out_dir,
                     const std::string& endpoint) {
  std::vector<std::string> names;
  if (name == "all") {
    names = fixture_names();
  } else {
    names.push_back(name);
  }
  for (const auto& n : names) {
    const CaseStudy fixture = load_fixture(n, FixtureOptions{endpoint});
    write_fixture_dir(fixture, std::filesystem::path(out_dir) / n);
    std::printf("wrote %s to %s\n", n.c_str(), (std::filesystem::path(out_dir) / n).c_str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned, dynamically updatable service descriptions for mobile-hosted "
               "services"};
  app.require_subcommand(1);

  auto* registry_cmd = app.add_subcommand("registry", "Run the service registry");
  std::string listen = "127.0.0.1:8480";
  std::string journal;
  registry_cmd->add_option("--listen", listen, "host:port to listen on");
  registry_cmd->add_option("--journal", journal, "append-only journal file");

  auto* provider_cmd = app.add_subcommand("provider", "Run a provider agent");
  std::string provider_listen = "127.0.0.1:8490";
  std::string bundle_dir;
  std::string provider_fixture;
  std::string trace_path;
  provider_cmd->add_option("--listen", provider_listen, "host:port to listen on");
  provider_cmd->add_option("--bundle", bundle_dir, "directory of provider XML documents");
  provider_cmd->add_option("--fixture", provider_fixture,
                           "host a built-in case study instead of --bundle");
  provider_cmd->add_option("--trace", trace_path, "snapshot script (JSON lines) to replay");

  auto* resolve_cmd = app.add_subcommand("resolve", "Search a registry and resolve descriptions");
  std::string registry_url;
  std::string query;
  std::string op;
  int limit = 10;
  std::int64_t window_ms = 60'000;
  std::string out_path;
  resolve_cmd->add_option("registry", registry_url, "registry base URL")->required();
  resolve_cmd->add_option("query", query, "service name substring");
  resolve_cmd->add_option("--op", op, "required interface operation name");
  resolve_cmd->add_option("--limit", limit, "maximum results");
  resolve_cmd->add_option("--window", window_ms, "staleness window in ms");
  resolve_cmd->add_option("--out", out_path, "write the resolution report to a file");

  auto* select_cmd = app.add_subcommand("select", "Resolve candidates and rank them");
  std::string criteria_path;
  select_cmd->add_option("criteria", criteria_path, "criteria JSON file")->required();

  auto* publish_cmd = app.add_subcommand("publish", "Publish a built-in case study");
  std::string publish_registry;
  std::string publish_fixture = "SalesmanTracking";
  std::string publish_endpoint;
  publish_cmd->add_option("--registry", publish_registry, "registry base URL")->required();
  publish_cmd->add_option("--fixture", publish_fixture, "case-study name");
  publish_cmd->add_option("--endpoint", publish_endpoint, "provider endpoint URL")->required();

  auto* sim_cmd = app.add_subcommand("sim", "Run a scenario deterministically");
  std::string config_path;
  std::uint64_t seed = 0;
  std::string sim_out;
  std::string sim_csv;
  sim_cmd->add_option("--config", config_path, "scenario JSON")->required();
  auto* seed_opt = sim_cmd->add_option("--seed", seed, "override the config seed");
  sim_cmd->add_option("--out", sim_out, "write the metrics report (JSON)");
  sim_cmd->add_option("--csv", sim_csv, "write the per-action table (CSV)");

  auto* conformance_cmd =
      app.add_subcommand("conformance", "Check a case study against a requirement profile");
  std::string fixture_name = "all";
  std::string profile_name;
  conformance_cmd->add_option("--fixture", fixture_name,
                              "MallLatestOffer | SalesmanTracking | CarPoolingMate | all");
  conformance_cmd->add_option("--profile", profile_name,
                              "Automated | SemiAutomated | Manual (default: the fixture's class)");

  auto* fixture_cmd = app.add_subcommand("fixture", "Write case-study bundles as XML directories");
  std::string emit_name = "all";
  std::string emit_dir = "fixtures";
  std::string emit_endpoint;
  fixture_cmd->add_option("--name", emit_name, "case-study name or 'all'");
  fixture_cmd->add_option("--out", emit_dir, "output directory");
  fixture_cmd->add_option("--endpoint", emit_endpoint, "provider endpoint for import links");

  CLI11_PARSE(app, argc, argv);

  try {
    if (registry_cmd->parsed()) return run_registry(listen, journal);
    if (provider_cmd->parsed()) {
      return run_provider(provider_listen, bundle_dir, provider_fixture, trace_path);
    }
    if (resolve_cmd->parsed()) {
      return run_resolve(registry_url, query, op, limit, window_ms, out_path);
    }
    if (select_cmd->parsed()) return run_select(criteria_path);
    if (publish_cmd->parsed()) {
      return run_publish(publish_registry, publish_fixture, publish_endpoint);
    }
    if (sim_cmd->parsed()) {
      return run_sim(config_path, seed, seed_opt->count() > 0, sim_out, sim_csv);
    }
    if (conformance_cmd->parsed()) return run_conformance(fixture_name, profile_name);
    if (fixture_cmd->parsed()) return run_fixture_emit(emit_name, emit_dir, emit_endpoint);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
