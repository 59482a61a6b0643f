#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mobidesc/codec/codec.hpp"
#include "mobidesc/core/time.hpp"
#include "mobidesc/model/build.hpp"

namespace mobidesc {

struct ServiceSummary {
  std::string service_id;
  std::string service_name;
  std::string service_uri;
  std::string provider_endpoint;

  friend bool operator==(const ServiceSummary&, const ServiceSummary&) = default;
};

struct PublishRequest {
  std::string service_name;
  std::string service_uri;
  std::string provider_endpoint;
  std::string functional_xml;
  std::optional<std::string> data_source_static_xml;
  std::optional<std::string> hardware_static_xml;
  Instant publish_instant;
};

struct FindQuery {
  std::optional<std::string> name_substring;
  std::optional<std::string> operation;
  int limit = 10;
};

enum class FetchStatus {
  Ok,
  WrongLocation, // provider-resident kind; carries the provider endpoint
  UnknownService,
  NoDocument, // registry slot with no stored static half
};

struct FetchResult {
  FetchStatus status = FetchStatus::Ok;
  std::string body;
  std::string provider_endpoint;
};

namespace registry_detail {

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

inline std::string service_id_for(std::string_view name, std::string_view uri) {
  std::string key(name);
  key += '\0';
  key += uri;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "svc-%016llx",
                static_cast<unsigned long long>(fnv1a64(key)));
  return buf;
}

inline std::vector<std::string> operation_names(const DescriptionDocument& functional) {
  std::vector<std::string> ops;
  for (const auto& g : functional.root.children) {
    if (g.name != "interface") continue;
    for (const auto& op : g.children) {
      if (op.name != "operation") continue;
      if (const ElementNode* n = op.child("name"); n && n->is_scalar()) ops.push_back(*n->value);
    }
  }
  return ops;
}

// The stored static half must consist purely of static-partition groups.
inline void check_static_half(const DescriptionDocument& doc, Slot slot,
                              const ServiceIdentity& service) {
  if (doc.kind != kind_of(slot)) {
    throw InvalidDocument("static document kind does not match slot " +
                          std::string(slot_token(slot)));
  }
  if (!(doc.service == service)) {
    throw InvalidDocument("static document names a different service");
  }
  const ValidationReport report = validate(doc);
  if (!report.valid()) {
    throw InvalidDocument("static document invalid: " + report.violations.front().detail);
  }
  for (const auto& g : doc.root.children) {
    if (group_is_dynamic(doc.kind, g.name)) {
      throw InvalidDocument("dynamic group '" + g.name + "' may not be stored at the registry");
    }
  }
}

} // namespace registry_detail

/// Service registry of the publish/find/bind triangle: holds functional
/// descriptions and the static halves of split documents, nothing else.
/// Published bytes are stored and served verbatim. Single writer, many
/// concurrent readers; an optional append-only journal restores state on
/// construction.
class Registry {
public:
  Registry() = default;

  explicit Registry(std::filesystem::path journal_path) : journal_path_(std::move(journal_path)) {
    replay_journal();
    journal_out_.open(*journal_path_, std::ios::app);
    if (!journal_out_) throw IoError("cannot open journal " + journal_path_->string());
  }

  /// Registers or updates a service. Re-publishing the same (name, uri)
  /// replaces the record under the same id.
  std::string publish(const PublishRequest& request) {
    auto record = make_record(request);
    const std::string id = record->service_id;
    {
      std::unique_lock lock(mutex_);
      records_[id] = std::move(record);
    }
    append_journal(publish_event(request));
    return id;
  }

  std::vector<ServiceSummary> find(const FindQuery& query) const {
    if (!query.name_substring && !query.operation) {
      throw InvalidQuery("find requires at least one criterion");
    }
    if (query.limit < 1) throw InvalidQuery("find limit must be >= 1");
    std::vector<ServiceSummary> results;
    {
      std::shared_lock lock(mutex_);
      for (const auto& [id, record] : records_) {
        if (query.name_substring &&
            record->service_name.find(*query.name_substring) == std::string::npos) {
          continue;
        }
        if (query.operation) {
          bool declares = false;
          for (const auto& op : record->operations) {
            if (op == *query.operation) declares = true;
          }
          if (!declares) continue;
        }
        results.push_back(ServiceSummary{record->service_id, record->service_name,
                                         record->service_uri, record->provider_endpoint});
      }
    }
    std::sort(results.begin(), results.end(), [](const ServiceSummary& a, const ServiceSummary& b) {
      if (a.service_name != b.service_name) return a.service_name < b.service_name;
      return a.service_id < b.service_id;
    });
    if (results.size() > static_cast<std::size_t>(query.limit)) {
      results.resize(static_cast<std::size_t>(query.limit));
    }
    return results;
  }

  /// Registry-resident slots return stored bytes; provider-resident slots
  /// redirect the caller with WrongLocation and the provider endpoint.
  FetchResult fetch_document(std::string_view service_id, Slot slot) const {
    std::shared_lock lock(mutex_);
    auto it = records_.find(std::string(service_id));
    if (it == records_.end()) return FetchResult{FetchStatus::UnknownService, {}, {}};
    const StoredRecord& record = *it->second;
    if (!is_registry_slot(slot)) {
      return FetchResult{FetchStatus::WrongLocation, {}, record.provider_endpoint};
    }
    if (slot == Slot::Functional) return FetchResult{FetchStatus::Ok, record.functional_bytes, {}};
    auto doc = record.static_docs.find(slot);
    if (doc == record.static_docs.end()) return FetchResult{FetchStatus::NoDocument, {}, {}};
    return FetchResult{FetchStatus::Ok, doc->second, {}};
  }

  /// Removing an unknown id is a no-op confirmation.
  void unpublish(std::string_view service_id) {
    {
      std::unique_lock lock(mutex_);
      records_.erase(std::string(service_id));
    }
    nlohmann::ordered_json event;
    event["event"] = "unpublish";
    event["serviceId"] = std::string(service_id);
    append_journal(event);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
  }

  /// Slots with stored bytes for a service — test hook for the placement
  /// invariant (the registry must never hold provider-resident documents).
  std::vector<Slot> stored_slots(std::string_view service_id) const {
    std::shared_lock lock(mutex_);
    std::vector<Slot> slots;
    auto it = records_.find(std::string(service_id));
    if (it == records_.end()) return slots;
    slots.push_back(Slot::Functional);
    for (const auto& [slot, bytes] : it->second->static_docs) slots.push_back(slot);
    return slots;
  }

private:
  struct StoredRecord {
    std::string service_id;
    std::string service_name;
    std::string service_uri;
    std::string provider_endpoint;
    std::string functional_bytes;
    std::map<Slot, std::string> static_docs;
    std::vector<std::string> operations;
    Instant publish_instant;
  };

  std::shared_ptr<const StoredRecord> make_record(const PublishRequest& request) const {
    if (!looks_like_uri(request.provider_endpoint)) {
      throw MalformedEndpoint("provider endpoint is not a URI: '" + request.provider_endpoint +
                              "'");
    }
    DescriptionDocument functional;
    try {
      functional = parse(request.functional_xml);
    } catch (const Error& e) {
      throw InvalidFunctional(std::string("functional description does not parse: ") + e.what());
    }
    if (functional.kind != Kind::Functional) {
      throw InvalidFunctional("published document is not a functional description");
    }
    const ValidationReport report = validate(functional);
    if (!report.valid()) {
      throw InvalidFunctional("functional description invalid: " +
                              report.violations.front().detail);
    }
    if (functional.service.name != request.service_name ||
        functional.service.uri != request.service_uri) {
      throw InvalidFunctional("functional description names a different service");
    }

    auto record = std::make_shared<StoredRecord>();
    record->service_id = registry_detail::service_id_for(request.service_name, request.service_uri);
    record->service_name = request.service_name;
    record->service_uri = request.service_uri;
    record->provider_endpoint = request.provider_endpoint;
    record->functional_bytes = request.functional_xml;
    record->operations = registry_detail::operation_names(functional);
    record->publish_instant = request.publish_instant;
    const ServiceIdentity service{request.service_name, request.service_uri};
    if (request.data_source_static_xml) {
      registry_detail::check_static_half(parse(*request.data_source_static_xml),
                                         Slot::DataSourceStatic, service);
      record->static_docs[Slot::DataSourceStatic] = *request.data_source_static_xml;
    }
    if (request.hardware_static_xml) {
      registry_detail::check_static_half(parse(*request.hardware_static_xml),
                                         Slot::HardwareStatic, service);
      record->static_docs[Slot::HardwareStatic] = *request.hardware_static_xml;
    }
    return record;
  }

  static nlohmann::ordered_json publish_event(const PublishRequest& request) {
    nlohmann::ordered_json event;
    event["event"] = "publish";
    event["serviceName"] = request.service_name;
    event["serviceUri"] = request.service_uri;
    event["providerEndpoint"] = request.provider_endpoint;
    event["functionalXml"] = request.functional_xml;
    if (request.data_source_static_xml) {
      event["dataSourceStaticXml"] = *request.data_source_static_xml;
    }
    if (request.hardware_static_xml) {
      event["hardwareStaticXml"] = *request.hardware_static_xml;
    }
    event["publishInstant"] = request.publish_instant.to_iso8601();
    return event;
  }

  void append_journal(const nlohmann::ordered_json& event) {
    if (!journal_path_) return;
    std::lock_guard lock(journal_mutex_);
    journal_out_ << event.dump() << '\n';
    journal_out_.flush();
    if (!journal_out_) throw IoError("journal write failed");
  }

  void replay_journal() {
    std::ifstream in(*journal_path_);
    if (!in) return; // first run: journal created on open for append
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json event = nlohmann::json::parse(line, nullptr, false);
      if (event.is_discarded()) {
        throw IoError("corrupt journal line " + std::to_string(line_no));
      }
      const std::string type = event.value("event", "");
      if (type == "publish") {
        PublishRequest request;
        request.service_name = event.at("serviceName").get<std::string>();
        request.service_uri = event.at("serviceUri").get<std::string>();
        request.provider_endpoint = event.at("providerEndpoint").get<std::string>();
        request.functional_xml = event.at("functionalXml").get<std::string>();
        if (event.contains("dataSourceStaticXml")) {
          request.data_source_static_xml = event["dataSourceStaticXml"].get<std::string>();
        }
        if (event.contains("hardwareStaticXml")) {
          request.hardware_static_xml = event["hardwareStaticXml"].get<std::string>();
        }
        request.publish_instant =
            Instant::parse_iso8601(event.at("publishInstant").get<std::string>());
        auto record = make_record(request);
        records_[record->service_id] = std::move(record);
      } else if (type == "unpublish") {
        records_.erase(event.at("serviceId").get<std::string>());
      } else {
        throw IoError("unknown journal event at line " + std::to_string(line_no));
      }
    }
  }

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const StoredRecord>> records_;
  std::optional<std::filesystem::path> journal_path_;
  std::ofstream journal_out_;
  std::mutex journal_mutex_;
};

} // namespace mobidesc
