#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mobidesc/codec/codec.hpp"
#include "mobidesc/net/wire.hpp"

namespace mobidesc {

enum class Source { Registry, Provider };

enum class MissReason { Offline, NotHosted, LinkBroken };

constexpr std::string_view to_string(Source s) {
  return s == Source::Registry ? "registry" : "provider";
}

constexpr std::string_view to_string(MissReason r) {
  switch (r) {
    case MissReason::Offline: return "Offline";
    case MissReason::NotHosted: return "NotHosted";
    case MissReason::LinkBroken: return "LinkBroken";
  }
  return ""; // unreachable
}

struct ResolvedDoc {
  DescriptionDocument document;
  Source source = Source::Registry;
  Instant fetched_at;

  friend bool operator==(const ResolvedDoc&, const ResolvedDoc&) = default;
};

/// Consumer-side assembly of one service's partitioned description. Every
/// kind appears either in `documents` or in `missing`; split kinds appear
/// merged (or as the registry's static half when the provider is down).
struct ResolvedDescription {
  ServiceSummary summary;
  std::map<Kind, ResolvedDoc> documents;
  std::vector<std::pair<Kind, MissReason>> missing;

  const ResolvedDoc* document(Kind kind) const {
    auto it = documents.find(kind);
    return it == documents.end() ? nullptr : &it->second;
  }

  std::optional<MissReason> miss_reason(Kind kind) const {
    for (const auto& [k, reason] : missing) {
      if (k == kind) return reason;
    }
    return std::nullopt;
  }
};

/// Recombines a split document: union of top-level entries where the dynamic
/// half wins collisions, timestamped by the dynamic half.
inline DescriptionDocument merge_split(const DescriptionDocument& static_part,
                                       const DescriptionDocument& dynamic_part) {
  if (static_part.kind != dynamic_part.kind || !is_split_kind(static_part.kind)) {
    throw KindMismatch("merge_split requires two halves of one split kind");
  }
  if (!(static_part.service == dynamic_part.service)) {
    throw ServiceMismatch("halves describe different services");
  }
  DescriptionDocument merged = dynamic_part;
  for (const auto& g : static_part.root.children) {
    if (!merged.root.child(g.name)) merged.root.children.push_back(g);
  }
  build_detail::sort_schema_order(merged.root.children, kind_schema(merged.kind).groups);
  merged.time_stamp = dynamic_part.time_stamp;
  return merged;
}

namespace resolve_detail {

// Import locations look like <endpoint>/desc/<slot-token>.
struct ImportTarget {
  std::string endpoint;
  Slot slot;
};

inline std::optional<ImportTarget> parse_location(std::string_view location) {
  const std::string_view marker = "/desc/";
  const auto pos = location.rfind(marker);
  if (pos == std::string_view::npos) return std::nullopt;
  const auto token = location.substr(pos + marker.size());
  const auto slot = slot_from_token(token);
  if (!slot) return std::nullopt;
  return ImportTarget{std::string(location.substr(0, pos)), *slot};
}

inline std::optional<MissReason> reason_for(ProviderCallStatus status) {
  switch (status) {
    case ProviderCallStatus::Ok: return std::nullopt;
    case ProviderCallStatus::Offline: return MissReason::Offline;
    case ProviderCallStatus::NotHosted: return MissReason::NotHosted;
    case ProviderCallStatus::Unreachable: return MissReason::LinkBroken;
  }
  return MissReason::LinkBroken;
}

// Parse + validate + identity check; nullopt means the payload is unusable
// and the kind should be reported as LinkBroken.
inline std::optional<DescriptionDocument> usable_document(const std::string& bytes, Kind kind,
                                                          const ServiceIdentity& service) {
  try {
    DescriptionDocument doc = parse(bytes);
    if (doc.kind != kind) return std::nullopt;
    if (!(doc.service == service)) return std::nullopt;
    if (!validate(doc).valid()) return std::nullopt;
    return doc;
  } catch (const Error&) {
    return std::nullopt;
  }
}

} // namespace resolve_detail

/// The 3-step retrieval: the summary came from a registry search, the
/// functional description is fetched from the registry, and the remaining
/// documents are fetched from the provider following the functional
/// description's import links (split kinds additionally pull their static
/// half from the registry). Provider failures populate `missing`; only an
/// unreachable registry or an unusable functional description abort.
inline ResolvedDescription resolve(const ServiceSummary& summary, RegistryClient& registry,
                                   ProviderClient& provider, Instant now) {
  ResolvedDescription result;
  result.summary = summary;
  const ServiceIdentity service{summary.service_name, summary.service_uri};

  const FetchResult functional = registry.fetch_document(summary.service_id, Slot::Functional);
  if (functional.status != FetchStatus::Ok) {
    throw FunctionalMissing("registry has no functional description for " + summary.service_id);
  }
  auto functional_doc =
      resolve_detail::usable_document(functional.body, Kind::Functional, service);
  if (!functional_doc) {
    throw FunctionalMissing("functional description for " + summary.service_id + " is unusable");
  }

  std::map<Kind, ImportLink> imports;
  for (const auto& link : functional_doc->imports) {
    if (auto kind = kind_from_namespace(link.namespace_uri); kind && !imports.count(*kind)) {
      imports.emplace(*kind, link);
    }
  }
  result.documents.emplace(Kind::Functional,
                           ResolvedDoc{std::move(*functional_doc), Source::Registry, now});

  auto fetch_from_provider = [&](Kind kind, const std::string& endpoint,
                                 Slot slot) -> std::pair<std::optional<DescriptionDocument>,
                                                         std::optional<MissReason>> {
    const ProviderDocResult fetched = provider.get_document(endpoint, slot);
    if (auto reason = resolve_detail::reason_for(fetched.status)) return {std::nullopt, *reason};
    auto doc = resolve_detail::usable_document(fetched.body, kind, service);
    if (!doc) return {std::nullopt, MissReason::LinkBroken};
    return {std::move(doc), std::nullopt};
  };

  for (Kind kind : kAllKinds) {
    if (kind == Kind::Functional) continue;

    // ConsumerBase is the one provider document without an import link; it is
    // addressed directly at the provider endpoint from the summary.
    std::optional<std::string> endpoint;
    if (kind == Kind::ConsumerBase) {
      endpoint = summary.provider_endpoint;
    } else if (auto it = imports.find(kind); it != imports.end()) {
      auto target = resolve_detail::parse_location(it->second.location);
      if (target && target->slot == *provider_slot_of(kind)) {
        endpoint = target->endpoint;
      } else if (!is_split_kind(kind)) { // malformed link
        result.missing.emplace_back(kind, MissReason::LinkBroken);
        continue;
      }
    }

    if (is_split_kind(kind)) {
      std::optional<DescriptionDocument> static_doc;
      const FetchResult fetched_static =
          registry.fetch_document(summary.service_id, *static_slot_of(kind));
      if (fetched_static.status == FetchStatus::Ok) {
        static_doc = resolve_detail::usable_document(fetched_static.body, kind, service);
      }
      std::optional<DescriptionDocument> dynamic_doc;
      std::optional<MissReason> dynamic_reason;
      if (endpoint) {
        auto [doc, reason] = fetch_from_provider(kind, *endpoint, *provider_slot_of(kind));
        dynamic_doc = std::move(doc);
        dynamic_reason = reason;
      } else if (imports.count(kind)) {
        dynamic_reason = MissReason::LinkBroken;
      } else {
        dynamic_reason = MissReason::NotHosted;
      }
      if (static_doc && dynamic_doc) {
        result.documents.emplace(
            kind, ResolvedDoc{merge_split(*static_doc, *dynamic_doc), Source::Provider, now});
      } else if (dynamic_doc) {
        result.documents.emplace(kind,
                                 ResolvedDoc{std::move(*dynamic_doc), Source::Provider, now});
      } else if (static_doc) {
        result.documents.emplace(kind, ResolvedDoc{std::move(*static_doc), Source::Registry, now});
      } else {
        result.missing.emplace_back(kind, dynamic_reason.value_or(MissReason::NotHosted));
      }
      continue;
    }

    if (!endpoint) {
      if (kind != Kind::ConsumerBase && !imports.count(kind)) {
        result.missing.emplace_back(kind, MissReason::NotHosted);
      }
      continue;
    }
    auto [doc, reason] = fetch_from_provider(kind, *endpoint, *provider_slot_of(kind));
    if (doc) {
      result.documents.emplace(kind, ResolvedDoc{std::move(*doc), Source::Provider, now});
    } else {
      result.missing.emplace_back(kind, *reason);
    }
  }
  return result;
}

struct StalenessEntry {
  DurationMs age{0};
  bool stale = false;

  friend bool operator==(const StalenessEntry&, const StalenessEntry&) = default;
};

/// Ages of the timestamped documents of one resolved description. Functional
/// carries no timestamp and is excluded.
struct StalenessReport {
  std::map<Kind, StalenessEntry> per_document;
  DurationMs window{0};
};

inline StalenessReport staleness(const ResolvedDescription& resolved, Instant now,
                                 DurationMs window) {
  StalenessReport report;
  report.window = window;
  for (const auto& [kind, doc] : resolved.documents) {
    if (!doc.document.time_stamp) continue;
    if (now < *doc.document.time_stamp) {
      throw ClockSkew("document " + std::string(kind_token(kind)) +
                      " is stamped after the evaluation instant");
    }
    const DurationMs age = now - *doc.document.time_stamp;
    report.per_document.emplace(kind, StalenessEntry{age, age > window});
  }
  return report;
}

/// Re-runs retrieval step 3 for the listed kinds. Refreshed split kinds merge
/// the fresh dynamic half with the static groups already held; failures move
/// the kind to `missing`.
inline ResolvedDescription refresh(const ResolvedDescription& resolved,
                                   const std::vector<Kind>& kinds, ProviderClient& provider,
                                   Instant now) {
  for (Kind kind : kinds) {
    if (!provider_slot_of(kind)) {
      throw InvalidQuery("refresh cannot target the functional description");
    }
  }
  ResolvedDescription result = resolved;
  const ServiceIdentity service{resolved.summary.service_name, resolved.summary.service_uri};
  for (Kind kind : kinds) {
    const Slot slot = *provider_slot_of(kind);
    const ProviderDocResult fetched = provider.get_document(resolved.summary.provider_endpoint, slot);
    std::optional<DescriptionDocument> doc;
    std::optional<MissReason> reason = resolve_detail::reason_for(fetched.status);
    if (!reason) {
      doc = resolve_detail::usable_document(fetched.body, kind, service);
      if (!doc) reason = MissReason::LinkBroken;
    }
    std::erase_if(result.missing, [&](const auto& m) { return m.first == kind; });
    if (!doc) {
      result.documents.erase(kind);
      result.missing.emplace_back(kind, *reason);
      continue;
    }
    if (is_split_kind(kind)) {
      if (const ResolvedDoc* existing = resolved.document(kind)) {
        doc = merge_split(static_half(existing->document), *doc);
      }
    }
    result.documents[kind] = ResolvedDoc{std::move(*doc), Source::Provider, now};
  }
  return result;
}

} // namespace mobidesc
