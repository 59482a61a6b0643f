#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mobidesc/core/errors.hpp"
#include "mobidesc/core/time.hpp"

namespace mobidesc {

struct ActionMetric {
  std::int64_t t = 0; // ms offset from the scenario base
  std::string action;
  std::string target;
  std::string outcome;
  std::uint64_t bytes = 0;
  std::int64_t latency_ms = 0;

  friend bool operator==(const ActionMetric&, const ActionMetric&) = default;
};

struct SelectionOutcome {
  std::int64_t t = 0;
  std::vector<std::pair<std::string, double>> ranking;

  friend bool operator==(const SelectionOutcome&, const SelectionOutcome&) = default;
};

/// Everything a scenario run reports. Serialization has a stable field order
/// so identical runs emit identical bytes.
struct MetricsReport {
  std::uint64_t seed = 0;
  std::string base;
  std::vector<ActionMetric> actions;
  std::map<std::string, std::vector<std::int64_t>> freshness_lag_ms; // kind token -> ages at use
  std::uint64_t consistency_violations = 0;
  std::vector<SelectionOutcome> selections;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["base"] = base;
    j["actions"] = nlohmann::ordered_json::array();
    for (const auto& a : actions) {
      nlohmann::ordered_json row;
      row["t"] = a.t;
      row["action"] = a.action;
      row["target"] = a.target;
      row["outcome"] = a.outcome;
      row["bytes"] = a.bytes;
      row["latencyMs"] = a.latency_ms;
      j["actions"].push_back(std::move(row));
    }
    j["freshnessLagMs"] = nlohmann::ordered_json::object();
    for (const auto& [kind, ages] : freshness_lag_ms) j["freshnessLagMs"][kind] = ages;
    j["consistencyViolations"] = consistency_violations;
    j["selections"] = nlohmann::ordered_json::array();
    for (const auto& s : selections) {
      nlohmann::ordered_json row;
      row["t"] = s.t;
      row["ranking"] = nlohmann::ordered_json::array();
      for (const auto& [name, score] : s.ranking) {
        row["ranking"].push_back(nlohmann::ordered_json::array({name, score}));
      }
      j["selections"].push_back(std::move(row));
    }
    return j;
  }

  static MetricsReport from_json(const nlohmann::json& j) {
    MetricsReport report;
    report.seed = j.at("seed").get<std::uint64_t>();
    report.base = j.at("base").get<std::string>();
    for (const auto& row : j.at("actions")) {
      ActionMetric a;
      a.t = row.at("t").get<std::int64_t>();
      a.action = row.at("action").get<std::string>();
      a.target = row.at("target").get<std::string>();
      a.outcome = row.at("outcome").get<std::string>();
      a.bytes = row.at("bytes").get<std::uint64_t>();
      a.latency_ms = row.at("latencyMs").get<std::int64_t>();
      report.actions.push_back(std::move(a));
    }
    for (const auto& [kind, ages] : j.at("freshnessLagMs").items()) {
      report.freshness_lag_ms[kind] = ages.get<std::vector<std::int64_t>>();
    }
    report.consistency_violations = j.at("consistencyViolations").get<std::uint64_t>();
    for (const auto& row : j.at("selections")) {
      SelectionOutcome s;
      s.t = row.at("t").get<std::int64_t>();
      for (const auto& entry : row.at("ranking")) {
        s.ranking.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<double>());
      }
      report.selections.push_back(std::move(s));
    }
    return report;
  }

  /// One CSV row per action.
  std::string to_csv() const {
    std::string out = "t,action,target,outcome,bytes,latencyMs\n";
    for (const auto& a : actions) {
      out += std::to_string(a.t) + "," + a.action + "," + a.target + "," + a.outcome + "," +
             std::to_string(a.bytes) + "," + std::to_string(a.latency_ms) + "\n";
    }
    return out;
  }
};

enum class MetricsFormat { Json, Csv };

inline void emit_metrics(const MetricsReport& report, const std::filesystem::path& path,
                         MetricsFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write metrics to " + path.string());
  if (format == MetricsFormat::Json) {
    out << report.to_json().dump(2) << '\n';
  } else {
    out << report.to_csv();
  }
  out.flush();
  if (!out) throw IoError("metrics write failed for " + path.string());
}

} // namespace mobidesc
