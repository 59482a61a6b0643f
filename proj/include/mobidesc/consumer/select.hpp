#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "mobidesc/consumer/resolver.hpp"

namespace mobidesc {

enum class Comparator { Lt, Le, Eq, Ne, Ge, Gt };

constexpr std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Eq: return "==";
    case Comparator::Ne: return "!=";
    case Comparator::Ge: return ">=";
    case Comparator::Gt: return ">";
  }
  return ""; // unreachable
}

inline std::optional<Comparator> comparator_from_string(std::string_view s) {
  if (s == "<") return Comparator::Lt;
  if (s == "<=") return Comparator::Le;
  if (s == "==") return Comparator::Eq;
  if (s == "!=") return Comparator::Ne;
  if (s == ">=") return Comparator::Ge;
  if (s == ">") return Comparator::Gt;
  return std::nullopt;
}

/// One check against a description aspect: the element at `path` inside the
/// `kind` document compared to `bound`. Numeric comparison when both sides
/// parse as numbers, lexicographic otherwise.
struct Predicate {
  Kind kind = Kind::NonFunctional;
  std::string path;
  Comparator cmp = Comparator::Ge;
  std::string bound;
};

struct SoftPreference {
  Predicate predicate;
  double weight = 1.0;
};

struct SelectionCriteria {
  std::vector<Predicate> hard;
  std::vector<SoftPreference> soft;
  DurationMs freshness_window{60'000};
};

struct RankedCandidate {
  ServiceSummary summary;
  double score = 0;

  friend bool operator==(const RankedCandidate&, const RankedCandidate&) = default;
};

namespace select_detail {

inline std::optional<double> as_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return out;
}

template <typename T>
bool compare(const T& lhs, Comparator cmp, const T& rhs) {
  switch (cmp) {
    case Comparator::Lt: return lhs < rhs;
    case Comparator::Le: return lhs <= rhs;
    case Comparator::Eq: return lhs == rhs;
    case Comparator::Ne: return lhs != rhs;
    case Comparator::Ge: return lhs >= rhs;
    case Comparator::Gt: return lhs > rhs;
  }
  return false; // unreachable
}

enum class Outcome { Satisfied, Unsatisfied, DocMissing, DocStale };

inline Outcome evaluate(const ResolvedDescription& candidate, const Predicate& predicate,
                        DurationMs window, Instant now) {
  const ResolvedDoc* doc = candidate.document(predicate.kind);
  if (!doc) return Outcome::DocMissing;
  if (doc->document.time_stamp && now >= *doc->document.time_stamp &&
      now - *doc->document.time_stamp > window) {
    return Outcome::DocStale;
  }
  const ElementNode* node = find_element(doc->document.root, predicate.path);
  if (!node || !node->is_scalar()) return Outcome::Unsatisfied;
  const auto lhs = as_number(*node->value);
  const auto rhs = as_number(predicate.bound);
  const bool satisfied = (lhs && rhs) ? compare(*lhs, predicate.cmp, *rhs)
                                      : compare(*node->value, predicate.cmp, predicate.bound);
  return satisfied ? Outcome::Satisfied : Outcome::Unsatisfied;
}

} // namespace select_detail

/// Hard-filter + weighted-soft-score selection. A candidate is excluded when
/// any hard predicate fails, targets a missing document, or targets a
/// document staler than the freshness window (stale reads as unknown).
/// Survivors score the sum of satisfied soft-preference weights and rank by
/// score descending, then service name, then id — fully deterministic.
inline std::vector<RankedCandidate> select(const std::vector<ResolvedDescription>& candidates,
                                           const SelectionCriteria& criteria, Instant now) {
  for (const auto& pref : criteria.soft) {
    if (!(pref.weight > 0)) throw InvalidQuery("soft preference weights must be > 0");
  }
  std::vector<RankedCandidate> ranked;
  for (const auto& candidate : candidates) {
    bool excluded = false;
    for (const auto& predicate : criteria.hard) {
      const auto outcome =
          select_detail::evaluate(candidate, predicate, criteria.freshness_window, now);
      if (outcome != select_detail::Outcome::Satisfied) {
        excluded = true;
        break;
      }
    }
    if (excluded) continue;
    double score = 0;
    for (const auto& pref : criteria.soft) {
      if (select_detail::evaluate(candidate, pref.predicate, criteria.freshness_window, now) ==
          select_detail::Outcome::Satisfied) {
        score += pref.weight;
      }
    }
    ranked.push_back(RankedCandidate{candidate.summary, score});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.summary.service_name != b.summary.service_name) {
      return a.summary.service_name < b.summary.service_name;
    }
    return a.summary.service_id < b.summary.service_id;
  });
  return ranked;
}

} // namespace mobidesc
