#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mobidesc/provider/agent.hpp"
#include "mobidesc/registry/registry.hpp"

namespace mobidesc {

/// Wire-level byte accounting, identical for loopback and HTTP transports:
/// each call costs method + space + path + request body + response body.
/// Single-threaded use per meter.
struct TrafficMeter {
  std::uint64_t requests = 0;
  std::uint64_t bytes = 0;

  void record(std::string_view method, std::string_view path, std::size_t request_body,
              std::size_t response_body) {
    requests += 1;
    bytes += method.size() + 1 + path.size() + request_body + response_body;
  }
};

namespace wire_json {

inline nlohmann::ordered_json summary_to_json(const ServiceSummary& s) {
  nlohmann::ordered_json j;
  j["serviceId"] = s.service_id;
  j["serviceName"] = s.service_name;
  j["serviceUri"] = s.service_uri;
  j["providerEndpoint"] = s.provider_endpoint;
  return j;
}

inline nlohmann::ordered_json summaries_to_json(const std::vector<ServiceSummary>& list) {
  nlohmann::ordered_json j;
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& s : list) j["results"].push_back(summary_to_json(s));
  return j;
}

inline ServiceSummary summary_from_json(const nlohmann::json& j) {
  ServiceSummary s;
  s.service_id = j.at("serviceId").get<std::string>();
  s.service_name = j.at("serviceName").get<std::string>();
  s.service_uri = j.at("serviceUri").get<std::string>();
  s.provider_endpoint = j.at("providerEndpoint").get<std::string>();
  return s;
}

inline nlohmann::ordered_json publish_to_json(const PublishRequest& r) {
  nlohmann::ordered_json j;
  j["serviceName"] = r.service_name;
  j["serviceUri"] = r.service_uri;
  j["providerEndpoint"] = r.provider_endpoint;
  j["functionalXml"] = r.functional_xml;
  if (r.data_source_static_xml) j["dataSourceStaticXml"] = *r.data_source_static_xml;
  if (r.hardware_static_xml) j["hardwareStaticXml"] = *r.hardware_static_xml;
  j["publishInstant"] = r.publish_instant.to_iso8601();
  return j;
}

inline PublishRequest publish_from_json(const nlohmann::json& j, Instant default_instant) {
  PublishRequest r;
  r.service_name = j.at("serviceName").get<std::string>();
  r.service_uri = j.at("serviceUri").get<std::string>();
  r.provider_endpoint = j.at("providerEndpoint").get<std::string>();
  r.functional_xml = j.at("functionalXml").get<std::string>();
  if (j.contains("dataSourceStaticXml")) {
    r.data_source_static_xml = j["dataSourceStaticXml"].get<std::string>();
  }
  if (j.contains("hardwareStaticXml")) {
    r.hardware_static_xml = j["hardwareStaticXml"].get<std::string>();
  }
  r.publish_instant = j.contains("publishInstant")
                          ? Instant::parse_iso8601(j["publishInstant"].get<std::string>())
                          : default_instant;
  return r;
}

inline std::string find_path(const FindQuery& q) {
  std::string path = "/find?";
  if (q.name_substring) path += "name=" + *q.name_substring + "&";
  if (q.operation) path += "op=" + *q.operation + "&";
  path += "limit=" + std::to_string(q.limit);
  return path;
}

} // namespace wire_json

/// Consumer-facing view of a registry, implemented over loopback or HTTP.
/// Transport failure raises RegistryUnreachable; everything else is a result.
class RegistryClient {
public:
  virtual ~RegistryClient() = default;
  virtual std::string publish(const PublishRequest& request) = 0;
  virtual std::vector<ServiceSummary> find(const FindQuery& query) = 0;
  virtual FetchResult fetch_document(std::string_view service_id, Slot slot) = 0;
  virtual void unpublish(std::string_view service_id) = 0;
};

enum class ProviderCallStatus { Ok, Offline, NotHosted, Unreachable };

struct ProviderDocResult {
  ProviderCallStatus status = ProviderCallStatus::Ok;
  std::string body;
};

/// Consumer-facing view of provider agents, addressed by endpoint URI.
/// Unknown or unreachable endpoints come back as Unreachable, never a throw.
class ProviderClient {
public:
  virtual ~ProviderClient() = default;
  virtual ProviderDocResult get_document(std::string_view endpoint, Slot slot) = 0;
  virtual ProviderCallStatus consume(std::string_view endpoint, std::string_view consumer_id) = 0;
};

/// In-process transport: calls the registry directly but accounts bytes as
/// the HTTP transport would.
class LoopbackRegistryClient : public RegistryClient {
public:
  explicit LoopbackRegistryClient(Registry& registry, TrafficMeter* meter = nullptr)
      : registry_(registry), meter_(meter) {}

  std::string publish(const PublishRequest& request) override {
    const std::string body = wire_json::publish_to_json(request).dump();
    const std::string id = registry_.publish(request);
    if (meter_) meter_->record("POST", "/publish", body.size(), id.size() + 16);
    return id;
  }

  std::vector<ServiceSummary> find(const FindQuery& query) override {
    auto results = registry_.find(query);
    if (meter_) {
      meter_->record("GET", wire_json::find_path(query), 0,
                     wire_json::summaries_to_json(results).dump().size());
    }
    return results;
  }

  FetchResult fetch_document(std::string_view service_id, Slot slot) override {
    FetchResult result = registry_.fetch_document(service_id, slot);
    if (meter_) {
      const std::string path = "/services/" + std::string(service_id) + "/documents/" +
                               std::string(slot_token(slot));
      std::size_t response = result.body.size();
      if (result.status == FetchStatus::WrongLocation) {
        response = result.provider_endpoint.size() + 24;
      }
      meter_->record("GET", path, 0, response);
    }
    return result;
  }

  void unpublish(std::string_view service_id) override {
    registry_.unpublish(service_id);
    if (meter_) meter_->record("DELETE", "/services/" + std::string(service_id), 0, 0);
  }

private:
  Registry& registry_;
  TrafficMeter* meter_;
};

/// Deployment map of the loopback network: endpoint URI -> agent.
class LoopbackProviderNetwork {
public:
  void add(std::string endpoint, std::shared_ptr<ProviderAgent> agent) {
    agents_[std::move(endpoint)] = std::move(agent);
  }

  std::shared_ptr<ProviderAgent> lookup(std::string_view endpoint) const {
    auto it = agents_.find(std::string(endpoint));
    return it == agents_.end() ? nullptr : it->second;
  }

private:
  std::map<std::string, std::shared_ptr<ProviderAgent>> agents_;
};

class LoopbackProviderClient : public ProviderClient {
public:
  explicit LoopbackProviderClient(const LoopbackProviderNetwork& network,
                                  TrafficMeter* meter = nullptr)
      : network_(network), meter_(meter) {}

  ProviderDocResult get_document(std::string_view endpoint, Slot slot) override {
    const std::string path =
        std::string(endpoint) + "/desc/" + std::string(slot_token(slot));
    auto agent = network_.lookup(endpoint);
    if (!agent) {
      if (meter_) meter_->record("GET", path, 0, 0);
      return ProviderDocResult{ProviderCallStatus::Unreachable, {}};
    }
    const DocResult result = agent->get_document(slot);
    if (meter_) meter_->record("GET", path, 0, result.body.size());
    switch (result.status) {
      case DocStatus::Ok: return ProviderDocResult{ProviderCallStatus::Ok, result.body};
      case DocStatus::Offline: return ProviderDocResult{ProviderCallStatus::Offline, {}};
      case DocStatus::NotHosted: return ProviderDocResult{ProviderCallStatus::NotHosted, {}};
    }
    return ProviderDocResult{ProviderCallStatus::Unreachable, {}};
  }

  ProviderCallStatus consume(std::string_view endpoint, std::string_view consumer_id) override {
    const std::string path = std::string(endpoint) + "/consume";
    auto agent = network_.lookup(endpoint);
    if (meter_) meter_->record("POST", path, consumer_id.size() + 18, 0);
    if (!agent) return ProviderCallStatus::Unreachable;
    if (!agent->online()) return ProviderCallStatus::Offline;
    try {
      agent->record_consumption(std::string(consumer_id), consume_clock_);
      return ProviderCallStatus::Ok;
    } catch (const NotHostedError&) {
      return ProviderCallStatus::NotHosted;
    }
  }

  /// Instant stamped into consumer-base entries recorded through this client.
  void set_consume_clock(Instant now) { consume_clock_ = now; }

private:
  const LoopbackProviderNetwork& network_;
  TrafficMeter* meter_;
  Instant consume_clock_;
};

} // namespace mobidesc
