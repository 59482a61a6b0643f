#pragma once

#include "json.hpp"

#include "mobidesc/consumer/select.hpp"

namespace mobidesc {

/// JSON shape used by the CLI and scenario scripts:
///   {"hard": [{"kind": "nonFunctional", "path": "serviceQoS/availability",
///              "cmp": ">=", "bound": "0.9"}],
///    "soft": [{... , "weight": 2.0}],
///    "freshnessWindowMs": 60000}
inline Predicate predicate_from_json(const nlohmann::json& j) {
  Predicate p;
  const auto kind = kind_from_token(j.at("kind").get<std::string>());
  if (!kind) throw ConfigError("unknown kind '" + j.at("kind").get<std::string>() + "'");
  p.kind = *kind;
  p.path = j.at("path").get<std::string>();
  const auto cmp = comparator_from_string(j.at("cmp").get<std::string>());
  if (!cmp) throw ConfigError("unknown comparator '" + j.at("cmp").get<std::string>() + "'");
  p.cmp = *cmp;
  if (j.at("bound").is_string()) {
    p.bound = j.at("bound").get<std::string>();
  } else {
    p.bound = j.at("bound").dump(); // numeric bounds may be written unquoted
  }
  return p;
}

inline SelectionCriteria criteria_from_json(const nlohmann::json& j) {
  SelectionCriteria criteria;
  try {
    if (j.contains("hard")) {
      for (const auto& p : j["hard"]) criteria.hard.push_back(predicate_from_json(p));
    }
    if (j.contains("soft")) {
      for (const auto& p : j["soft"]) {
        criteria.soft.push_back(
            SoftPreference{predicate_from_json(p), p.at("weight").get<double>()});
      }
    }
    if (j.contains("freshnessWindowMs")) {
      criteria.freshness_window = DurationMs{j["freshnessWindowMs"].get<std::int64_t>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad criteria: ") + e.what());
  }
  return criteria;
}

inline nlohmann::ordered_json predicate_to_json(const Predicate& p) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(kind_token(p.kind));
  j["path"] = p.path;
  j["cmp"] = std::string(to_string(p.cmp));
  j["bound"] = p.bound;
  return j;
}

inline nlohmann::ordered_json criteria_to_json(const SelectionCriteria& criteria) {
  nlohmann::ordered_json j;
  j["hard"] = nlohmann::ordered_json::array();
  for (const auto& p : criteria.hard) j["hard"].push_back(predicate_to_json(p));
  j["soft"] = nlohmann::ordered_json::array();
  for (const auto& p : criteria.soft) {
    auto row = predicate_to_json(p.predicate);
    row["weight"] = p.weight;
    j["soft"].push_back(std::move(row));
  }
  j["freshnessWindowMs"] = criteria.freshness_window.count();
  return j;
}

} // namespace mobidesc
