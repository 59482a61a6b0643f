#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "mobidesc/net/wire.hpp"

namespace mobidesc {

inline Instant wall_clock_now() {
  return Instant::from_millis(std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::system_clock::now().time_since_epoch())
                                  .count());
}

namespace http_detail {

inline void json_error(httplib::Response& res, int status, std::string_view code,
                       std::string_view detail = {}) {
  nlohmann::ordered_json body;
  body["error"] = std::string(code);
  if (!detail.empty()) body["detail"] = std::string(detail);
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

} // namespace http_detail

/// HTTP/1.1 face of a Registry:
///   POST   /publish                          JSON envelope -> {"serviceId"}
///   GET    /find?name=&op=&limit=            -> {"results": [...]}
///   GET    /services/{id}/documents/{kind}   -> XML, 409 WrongLocation, 404
///   DELETE /services/{id}                    -> 204
class RegistryServer {
public:
  explicit RegistryServer(Registry& registry,
                          std::function<Instant()> clock = wall_clock_now)
      : registry_(registry), clock_(std::move(clock)) {
    server_.Post("/publish", [this](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        http_detail::json_error(res, 400, "BadRequest", "body is not JSON");
        return;
      }
      try {
        const PublishRequest request = wire_json::publish_from_json(body, clock_());
        const std::string id = registry_.publish(request);
        nlohmann::ordered_json out;
        out["serviceId"] = id;
        res.set_content(out.dump(), "application/json");
      } catch (const InvalidFunctional& e) {
        http_detail::json_error(res, 400, "InvalidFunctional", e.what());
      } catch (const MalformedEndpoint& e) {
        http_detail::json_error(res, 400, "MalformedEndpoint", e.what());
      } catch (const Error& e) {
        http_detail::json_error(res, 400, "InvalidDocument", e.what());
      }
    });

    server_.Get("/find", [this](const httplib::Request& req, httplib::Response& res) {
      FindQuery query;
      if (req.has_param("name")) query.name_substring = req.get_param_value("name");
      if (req.has_param("op")) query.operation = req.get_param_value("op");
      if (req.has_param("limit")) query.limit = std::atoi(req.get_param_value("limit").c_str());
      try {
        res.set_content(wire_json::summaries_to_json(registry_.find(query)).dump(),
                        "application/json");
      } catch (const InvalidQuery& e) {
        http_detail::json_error(res, 400, "InvalidQuery", e.what());
      }
    });

    server_.Get(R"(/services/([^/]+)/documents/([^/]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const auto slot = slot_from_token(req.matches[2].str());
                  if (!slot) {
                    http_detail::json_error(res, 404, "UnknownKind");
                    return;
                  }
                  const FetchResult result =
                      registry_.fetch_document(req.matches[1].str(), *slot);
                  switch (result.status) {
                    case FetchStatus::Ok:
                      res.set_content(result.body, "application/xml");
                      break;
                    case FetchStatus::WrongLocation: {
                      nlohmann::ordered_json body;
                      body["error"] = "WrongLocation";
                      body["providerEndpoint"] = result.provider_endpoint;
                      res.status = 409;
                      res.set_content(body.dump(), "application/json");
                      break;
                    }
                    case FetchStatus::UnknownService:
                      http_detail::json_error(res, 404, "UnknownService");
                      break;
                    case FetchStatus::NoDocument:
                      http_detail::json_error(res, 404, "NoDocument");
                      break;
                  }
                });

    server_.Delete(R"(/services/([^/]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                     registry_.unpublish(req.matches[1].str());
                     res.status = 204;
                   });
  }

  /// Binds and serves on a background thread; port 0 picks a free port.
  int start(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host)
                                : (server_.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  ~RegistryServer() { stop(); }

private:
  Registry& registry_;
  std::function<Instant()> clock_;
  httplib::Server server_;
  std::thread thread_;
};

/// HTTP/1.1 face of one provider agent:
///   GET  /desc/{kind}   -> XML, 503 when offline, 404 when not hosted
///   POST /consume       {"consumerId"} -> 204
class ProviderServer {
public:
  explicit ProviderServer(std::shared_ptr<ProviderAgent> initial_agent,
                          std::function<Instant()> clock = wall_clock_now)
      : agent_(std::move(initial_agent)), clock_(std::move(clock)) {
    server_.Get(R"(/desc/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto slot = slot_from_token(req.matches[1].str());
      if (!slot || !is_provider_slot(*slot)) {
        http_detail::json_error(res, 404, "NotHosted");
        return;
      }
      const DocResult result = agent()->get_document(*slot);
      switch (result.status) {
        case DocStatus::Ok:
          res.set_content(result.body, "application/xml");
          break;
        case DocStatus::Offline:
          http_detail::json_error(res, 503, "Offline");
          break;
        case DocStatus::NotHosted:
          http_detail::json_error(res, 404, "NotHosted");
          break;
      }
    });

    server_.Post("/consume", [this](const httplib::Request& req, httplib::Response& res) {
      if (!agent()->online()) {
        http_detail::json_error(res, 503, "Offline");
        return;
      }
      nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("consumerId")) {
        http_detail::json_error(res, 400, "BadRequest", "expected {\"consumerId\": ...}");
        return;
      }
      try {
        agent()->record_consumption(body["consumerId"].get<std::string>(), clock_());
        res.status = 204;
      } catch (const NotHostedError& e) {
        http_detail::json_error(res, 404, "NotHosted", e.what());
      }
    });
  }

  /// Swaps the served agent, e.g. once the bound port is known and the bundle
  /// can be built with its real endpoint.
  void set_agent(std::shared_ptr<ProviderAgent> agent) {
    std::lock_guard lock(agent_mutex_);
    agent_ = std::move(agent);
  }

  std::shared_ptr<ProviderAgent> agent() const {
    std::lock_guard lock(agent_mutex_);
    return agent_;
  }

  int start(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host)
                                : (server_.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  ~ProviderServer() { stop(); }

private:
  std::shared_ptr<ProviderAgent> agent_;
  mutable std::mutex agent_mutex_;
  std::function<Instant()> clock_;
  httplib::Server server_;
  std::thread thread_;
};

/// RegistryClient over HTTP. Connection-level failures raise
/// RegistryUnreachable; wire bytes are accounted exactly like the loopback
/// transport.
class HttpRegistryClient : public RegistryClient {
public:
  explicit HttpRegistryClient(std::string base_url, TrafficMeter* meter = nullptr)
      : base_url_(std::move(base_url)), meter_(meter) {}

  std::string publish(const PublishRequest& request) override {
    httplib::Client client(base_url_);
    const std::string body = wire_json::publish_to_json(request).dump();
    auto res = client.Post("/publish", body, "application/json");
    if (!res) throw RegistryUnreachable("POST " + base_url_ + "/publish failed");
    if (meter_) meter_->record("POST", "/publish", body.size(), res->body.size());
    nlohmann::json out = nlohmann::json::parse(res->body, nullptr, false);
    if (res->status != 200 || out.is_discarded()) {
      const std::string code = out.is_discarded() ? "" : out.value("error", "");
      const std::string detail = out.is_discarded() ? res->body : out.value("detail", "");
      if (code == "InvalidFunctional") throw InvalidFunctional(detail);
      if (code == "MalformedEndpoint") throw MalformedEndpoint(detail);
      throw InvalidDocument("publish rejected: " + detail);
    }
    return out.at("serviceId").get<std::string>();
  }

  std::vector<ServiceSummary> find(const FindQuery& query) override {
    httplib::Client client(base_url_);
    const std::string path = wire_json::find_path(query);
    auto res = client.Get(path);
    if (!res) throw RegistryUnreachable("GET " + base_url_ + path + " failed");
    if (meter_) meter_->record("GET", path, 0, res->body.size());
    if (res->status != 200) throw InvalidQuery("find rejected: " + res->body);
    nlohmann::json out = nlohmann::json::parse(res->body);
    std::vector<ServiceSummary> results;
    for (const auto& item : out.at("results")) {
      results.push_back(wire_json::summary_from_json(item));
    }
    return results;
  }

  FetchResult fetch_document(std::string_view service_id, Slot slot) override {
    httplib::Client client(base_url_);
    const std::string path = "/services/" + std::string(service_id) + "/documents/" +
                             std::string(slot_token(slot));
    auto res = client.Get(path);
    if (!res) throw RegistryUnreachable("GET " + base_url_ + path + " failed");
    if (meter_) meter_->record("GET", path, 0, res->body.size());
    if (res->status == 200) return FetchResult{FetchStatus::Ok, res->body, {}};
    nlohmann::json out = nlohmann::json::parse(res->body, nullptr, false);
    if (res->status == 409 && !out.is_discarded()) {
      return FetchResult{FetchStatus::WrongLocation, {},
                         out.value("providerEndpoint", std::string{})};
    }
    if (!out.is_discarded() && out.value("error", "") == "NoDocument") {
      return FetchResult{FetchStatus::NoDocument, {}, {}};
    }
    return FetchResult{FetchStatus::UnknownService, {}, {}};
  }

  void unpublish(std::string_view service_id) override {
    httplib::Client client(base_url_);
    const std::string path = "/services/" + std::string(service_id);
    auto res = client.Delete(path);
    if (!res) throw RegistryUnreachable("DELETE " + base_url_ + path + " failed");
    if (meter_) meter_->record("DELETE", path, 0, 0);
  }

private:
  std::string base_url_;
  TrafficMeter* meter_;
};

/// ProviderClient over HTTP; endpoints are base URLs from service summaries
/// or import locations.
class HttpProviderClient : public ProviderClient {
public:
  explicit HttpProviderClient(TrafficMeter* meter = nullptr) : meter_(meter) {}

  ProviderDocResult get_document(std::string_view endpoint, Slot slot) override {
    httplib::Client client{std::string(endpoint)};
    const std::string path = "/desc/" + std::string(slot_token(slot));
    auto res = client.Get(path);
    if (meter_) {
      meter_->record("GET", std::string(endpoint) + path, 0, res ? res->body.size() : 0);
    }
    if (!res) return ProviderDocResult{ProviderCallStatus::Unreachable, {}};
    if (res->status == 200) return ProviderDocResult{ProviderCallStatus::Ok, res->body};
    if (res->status == 503) return ProviderDocResult{ProviderCallStatus::Offline, {}};
    return ProviderDocResult{ProviderCallStatus::NotHosted, {}};
  }

  ProviderCallStatus consume(std::string_view endpoint, std::string_view consumer_id) override {
    httplib::Client client{std::string(endpoint)};
    nlohmann::ordered_json body;
    body["consumerId"] = std::string(consumer_id);
    const std::string payload = body.dump();
    auto res = client.Post("/consume", payload, "application/json");
    if (meter_) {
      meter_->record("POST", std::string(endpoint) + "/consume", payload.size(),
                     res ? res->body.size() : 0);
    }
    if (!res) return ProviderCallStatus::Unreachable;
    if (res->status == 204) return ProviderCallStatus::Ok;
    if (res->status == 503) return ProviderCallStatus::Offline;
    return ProviderCallStatus::NotHosted;
  }

private:
  TrafficMeter* meter_;
};

} // namespace mobidesc
