#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobidesc/codec/codec.hpp"
#include "mobidesc/model/build.hpp"
#include "mobidesc/provider/snapshot.hpp"

namespace mobidesc {

/// The documents one provider hosts: every provider-resident slot it offers,
/// all describing the same service.
struct ServiceBundle {
  ServiceIdentity service;
  std::map<Slot, DescriptionDocument> documents;
};

enum class DocStatus { Ok, Offline, NotHosted };

struct DocResult {
  DocStatus status = DocStatus::Ok;
  std::string body;
};

struct UpdateEvent {
  Slot slot;
  Instant time_stamp;

  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

namespace agent_detail {

// Creates or replaces root/group/.../leaf, carrying the dynamic flag and unit
// the schema assigns.
inline void upsert_leaf(DescriptionDocument& doc, const std::vector<std::string>& path,
                        std::string value) {
  ElementNode* node = &doc.root;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    ElementNode* next = node->child(path[i]);
    if (!next) {
      node->children.push_back(container(path[i]));
      next = &node->children.back();
    }
    node = next;
  }
  if (ElementNode* leaf_node = node->child(path.back())) {
    leaf_node->value = std::move(value);
    leaf_node->children.clear();
  } else {
    node->children.push_back(scalar(path.back(), std::move(value)));
  }
}

/// Bandwidth tier a network type affords; written into
/// nonFunctional/networkQoS/bandwidthCapability.
constexpr std::string_view bandwidth_tier(NetworkType n) {
  switch (n) {
    case NetworkType::WiFi: return "high";
    case NetworkType::WiMAX: return "medium";
    case NetworkType::GSM: return "low";
    case NetworkType::None: return "none";
  }
  return ""; // unreachable
}

/// Estimated runtime from the power state; any deterministic rule works, it
/// only has to change exactly when battery or charging change.
inline std::string estimated_runtime_minutes(int battery_percent, bool charging) {
  return std::to_string(charging ? 600 : battery_percent * 6);
}

} // namespace agent_detail

/// A simulated mobile service provider: hosts the dynamic description
/// documents, serves their canonical bytes, and runs the watchdog that senses
/// snapshot changes and rewrites affected documents with fresh timestamps.
/// One writer (the watchdog), many concurrent readers; each document is
/// swapped atomically so readers never observe a torn document.
class ProviderAgent {
public:
  struct StoredDoc {
    DescriptionDocument document;
    std::string bytes; // canonical serialization of `document`
  };

  explicit ProviderAgent(ServiceBundle bundle) : service_(bundle.service) {
    for (auto& [slot, doc] : bundle.documents) {
      if (!is_provider_slot(slot)) {
        throw InvalidBundle("slot " + std::string(slot_token(slot)) +
                            " is not provider-resident");
      }
      if (doc.kind != kind_of(slot)) {
        throw InvalidBundle("document kind does not match slot " +
                            std::string(slot_token(slot)));
      }
      if (!(doc.service == service_)) {
        throw InvalidBundle("document for slot " + std::string(slot_token(slot)) +
                            " names a different service");
      }
      if (slot == Slot::DataSourceDynamic || slot == Slot::HardwareDynamic) {
        for (const auto& g : doc.root.children) {
          if (!group_is_dynamic(doc.kind, g.name)) {
            throw InvalidBundle("static group '" + g.name + "' may not be hosted at the provider");
          }
        }
      }
      const ValidationReport report = validate(doc);
      if (!report.valid()) {
        throw InvalidBundle("document for slot " + std::string(slot_token(slot)) +
                            " invalid: " + report.violations.front().detail);
      }
      store(slot, std::move(doc));
    }
    if (auto it = docs_.find(Slot::Collaborator); it != docs_.end()) {
      const DescriptionDocument& collab = it->second->document;
      if (const ElementNode* freq = collab.root.child("updateFrequency");
          freq && freq->is_scalar()) {
        const double seconds = std::strtod(freq->value->c_str(), nullptr);
        if (seconds > 0) {
          collaborator_period_ = DurationMs{static_cast<std::int64_t>(seconds * 1000.0)};
          last_collaborator_refresh_ = collab.time_stamp.value_or(Instant{});
        }
      }
    }
  }

  const ServiceIdentity& service() const { return service_; }

  bool online() const {
    std::lock_guard lock(docs_mutex_);
    return online_;
  }

  /// Toggles servability; idempotent. Offline agents keep ticking, their
  /// documents are just unservable.
  void set_online(bool flag) {
    std::lock_guard lock(docs_mutex_);
    online_ = flag;
  }

  std::vector<Slot> hosted_slots() const {
    std::lock_guard lock(docs_mutex_);
    std::vector<Slot> slots;
    for (const auto& [slot, doc] : docs_) slots.push_back(slot);
    return slots;
  }

  DocResult get_document(Slot slot) const {
    std::shared_ptr<const StoredDoc> doc;
    {
      std::lock_guard lock(docs_mutex_);
      if (!online_) return DocResult{DocStatus::Offline, {}};
      auto it = docs_.find(slot);
      if (it == docs_.end()) return DocResult{DocStatus::NotHosted, {}};
      doc = it->second;
    }
    return DocResult{DocStatus::Ok, doc->bytes};
  }

  /// Current in-memory document, for tests and the harness.
  std::shared_ptr<const StoredDoc> document(Slot slot) const {
    std::lock_guard lock(docs_mutex_);
    auto it = docs_.find(slot);
    return it == docs_.end() ? nullptr : it->second;
  }

  /// One watchdog pass over a fresh snapshot. Every hosted document with a
  /// mapped field that changed since the previous tick is atomically replaced
  /// by an updated copy stamped with the snapshot clock; untouched documents
  /// keep their timestamps. Collaborator entries refresh on their declared
  /// updateFrequency timer instead.
  std::vector<UpdateEvent> watchdog_tick(const ContextSnapshot& snapshot) {
    snapshot.check();
    std::lock_guard writer(writer_mutex_);
    if (last_snapshot_ && snapshot.clock < last_snapshot_->clock) {
      throw ClockSkew("snapshot clock moved backwards");
    }

    const bool first = !last_snapshot_.has_value();
    const bool battery_changed =
        first || snapshot.battery_percent != last_snapshot_->battery_percent;
    const bool charging_changed = first || snapshot.charging != last_snapshot_->charging;
    const bool network_changed = first || snapshot.network_type != last_snapshot_->network_type;
    const bool gps_changed = first || !(snapshot.gps == last_snapshot_->gps);
    const bool memory_changed = first || snapshot.free_memory_mb != last_snapshot_->free_memory_mb;
    const bool presence_changed =
        first || snapshot.user_presence != last_snapshot_->user_presence;

    std::vector<UpdateEvent> updates;
    auto rewrite = [&](Slot slot, auto&& mutate) {
      std::shared_ptr<const StoredDoc> current = document(slot);
      if (!current) return;
      DescriptionDocument doc = current->document;
      mutate(doc);
      doc.time_stamp = snapshot.clock;
      normalize_document(doc);
      store(slot, std::move(doc));
      updates.push_back(UpdateEvent{slot, snapshot.clock});
    };

    if (battery_changed || charging_changed || network_changed || gps_changed ||
        presence_changed) {
      rewrite(Slot::Contextual, [&](DescriptionDocument& doc) {
        agent_detail::upsert_leaf(doc, {"deviceContext", "batteryStatus"},
                                  std::to_string(snapshot.battery_percent));
        agent_detail::upsert_leaf(doc, {"deviceContext", "charging"},
                                  snapshot.charging ? "true" : "false");
        agent_detail::upsert_leaf(doc, {"deviceContext", "networkType"},
                                  std::string(to_string(snapshot.network_type)));
        agent_detail::upsert_leaf(doc, {"userContext", "location", "gpsCoordinates", "latitude"},
                                  format_number(snapshot.gps.latitude));
        agent_detail::upsert_leaf(doc, {"userContext", "location", "gpsCoordinates", "longitude"},
                                  format_number(snapshot.gps.longitude));
        agent_detail::upsert_leaf(doc, {"userContext", "presence"},
                                  std::string(to_string(snapshot.user_presence)));
      });
    }
    if (network_changed) {
      rewrite(Slot::NonFunctional, [&](DescriptionDocument& doc) {
        agent_detail::upsert_leaf(doc, {"networkQoS", "bandwidthCapability"},
                                  std::string(agent_detail::bandwidth_tier(snapshot.network_type)));
      });
    }
    if (gps_changed) {
      rewrite(Slot::DataSourceDynamic, [&](DescriptionDocument& doc) {
        agent_detail::upsert_leaf(doc, {"locationDetail", "gpsCoordinates", "latitude"},
                                  format_number(snapshot.gps.latitude));
        agent_detail::upsert_leaf(doc, {"locationDetail", "gpsCoordinates", "longitude"},
                                  format_number(snapshot.gps.longitude));
      });
    }
    if (battery_changed || charging_changed || memory_changed) {
      rewrite(Slot::HardwareDynamic, [&](DescriptionDocument& doc) {
        if (battery_changed || charging_changed) {
          agent_detail::upsert_leaf(doc, {"powerDetail", "batteryPercent"},
                                    std::to_string(snapshot.battery_percent));
          agent_detail::upsert_leaf(doc, {"powerDetail", "charging"},
                                    snapshot.charging ? "true" : "false");
          agent_detail::upsert_leaf(doc, {"powerDetail", "estimatedRuntimeMinutes"},
                                    agent_detail::estimated_runtime_minutes(
                                        snapshot.battery_percent, snapshot.charging));
        }
        if (memory_changed) {
          agent_detail::upsert_leaf(doc, {"memoryDetail", "freeMb"},
                                    std::to_string(snapshot.free_memory_mb));
        }
      });
    }
    if (collaborator_period_ &&
        snapshot.clock - last_collaborator_refresh_ >= *collaborator_period_) {
      rewrite(Slot::Collaborator, [](DescriptionDocument&) {
        // Content is re-confirmed as current; only the timestamp moves.
      });
      last_collaborator_refresh_ = snapshot.clock;
    }

    last_snapshot_ = snapshot;
    return updates;
  }

  /// Upserts a consumer-base entry: invocation count bumped (or created at
  /// 1), last-invocation instant and document timestamp set.
  DescriptionDocument record_consumption(const std::string& consumer_id, Instant instant) {
    std::lock_guard writer(writer_mutex_);
    std::shared_ptr<const StoredDoc> current = document(Slot::ConsumerBase);
    if (!current) throw NotHostedError("no consumer base hosted");
    DescriptionDocument doc = current->document;
    ElementNode* entry = nullptr;
    for (auto& c : doc.root.children) {
      if (c.name != "consumer") continue;
      if (const ElementNode* id = c.child("identity"); id && id->is_scalar() &&
                                                       *id->value == consumer_id) {
        entry = &c;
        break;
      }
    }
    if (entry) {
      ElementNode* count = entry->child("invocationCount");
      if (!count) {
        entry->children.push_back(scalar("invocationCount", "0"));
        count = entry->child("invocationCount");
      }
      const long long next = std::strtoll(count->value->c_str(), nullptr, 10) + 1;
      count->value = std::to_string(next);
      if (ElementNode* last = entry->child("lastInvocation")) {
        last->value = instant.to_iso8601();
      } else {
        entry->children.push_back(scalar("lastInvocation", instant.to_iso8601()));
      }
    } else {
      doc.root.children.push_back(
          container("consumer", {scalar("identity", consumer_id), scalar("invocationCount", "1"),
                                 scalar("lastInvocation", instant.to_iso8601())}));
    }
    doc.time_stamp = instant;
    normalize_document(doc);
    store(Slot::ConsumerBase, std::move(doc));
    return document(Slot::ConsumerBase)->document;
  }

private:
  // Serialization happens outside the map lock; the lock only swaps the
  // pointer, so readers racing a tick see either the whole old document or
  // the whole new one.
  void store(Slot slot, DescriptionDocument doc) {
    auto stored = std::make_shared<StoredDoc>();
    stored->bytes = serialize(doc).bytes;
    stored->document = std::move(doc);
    std::lock_guard lock(docs_mutex_);
    docs_[slot] = std::move(stored);
  }

  ServiceIdentity service_;
  std::map<Slot, std::shared_ptr<const StoredDoc>> docs_;
  bool online_ = true;
  std::optional<ContextSnapshot> last_snapshot_;
  std::optional<DurationMs> collaborator_period_;
  Instant last_collaborator_refresh_;
  mutable std::mutex docs_mutex_;  // guards docs_ and online_, held only to copy or swap
  std::mutex writer_mutex_;        // serializes the watchdog and consumption updates
};

/// Reads a bundle from a directory of canonical XML documents named by slot
/// token ("contextual.xml", "hardware-dynamic.xml", ...).
inline ServiceBundle load_bundle_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  ServiceBundle bundle;
  bool have_service = false;
  for (Slot slot : kProviderSlots) {
    const fs::path path = fs::path(dir) / (std::string(slot_token(slot)) + ".xml");
    if (!fs::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    DescriptionDocument doc = parse(bytes);
    if (!have_service) {
      bundle.service = doc.service;
      have_service = true;
    }
    bundle.documents.emplace(slot, std::move(doc));
  }
  if (!have_service) throw InvalidBundle("no provider documents found in " + dir);
  return bundle;
}

} // namespace mobidesc
