#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mobidesc/core/errors.hpp"
#include "mobidesc/core/time.hpp"

namespace mobidesc {

enum class NetworkType { WiFi, GSM, WiMAX, None };
enum class UserPresence { Available, Busy, Away };

constexpr std::string_view to_string(NetworkType n) {
  switch (n) {
    case NetworkType::WiFi: return "WiFi";
    case NetworkType::GSM: return "GSM";
    case NetworkType::WiMAX: return "WiMAX";
    case NetworkType::None: return "None";
  }
  return ""; // unreachable
}

inline NetworkType network_type_from_string(std::string_view s) {
  if (s == "WiFi") return NetworkType::WiFi;
  if (s == "GSM") return NetworkType::GSM;
  if (s == "WiMAX") return NetworkType::WiMAX;
  if (s == "None") return NetworkType::None;
  throw InvalidValue("unknown network type '" + std::string(s) + "'");
}

constexpr std::string_view to_string(UserPresence p) {
  switch (p) {
    case UserPresence::Available: return "available";
    case UserPresence::Busy: return "busy";
    case UserPresence::Away: return "away";
  }
  return ""; // unreachable
}

inline UserPresence presence_from_string(std::string_view s) {
  if (s == "available") return UserPresence::Available;
  if (s == "busy") return UserPresence::Busy;
  if (s == "away") return UserPresence::Away;
  throw InvalidValue("unknown presence '" + std::string(s) + "'");
}

struct GpsPoint {
  double latitude = 0;
  double longitude = 0;

  friend bool operator==(const GpsPoint&, const GpsPoint&) = default;
};

/// One sensed state of the simulated device; the watchdog diffs successive
/// snapshots. Snapshots replace the mobile OS sensor APIs.
struct ContextSnapshot {
  int battery_percent = 100;
  bool charging = false;
  NetworkType network_type = NetworkType::WiFi;
  GpsPoint gps;
  long long free_memory_mb = 0;
  UserPresence user_presence = UserPresence::Available;
  Instant clock;

  void check() const {
    if (battery_percent < 0 || battery_percent > 100) {
      throw InvalidValue("battery percent out of range");
    }
    if (gps.latitude < -90 || gps.latitude > 90 || gps.longitude < -180 || gps.longitude > 180) {
      throw InvalidValue("gps coordinates out of range");
    }
    if (free_memory_mb < 0) throw InvalidValue("free memory must be >= 0");
  }
};

/// Formats coordinate-like doubles the same way everywhere so derived
/// document values compare deterministically.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// One line of a snapshot trace: the snapshot fields plus a millisecond
/// offset from the scenario base instant.
struct TraceStep {
  DurationMs offset{0};
  ContextSnapshot snapshot; // clock filled in when the trace is scheduled
};

inline TraceStep trace_step_from_json(const nlohmann::json& line) {
  TraceStep step;
  try {
    step.offset = DurationMs{line.at("t").get<std::int64_t>()};
    step.snapshot.battery_percent = line.at("batteryPercent").get<int>();
    step.snapshot.charging = line.at("charging").get<bool>();
    step.snapshot.network_type =
        network_type_from_string(line.at("networkType").get<std::string>());
    const auto& gps = line.at("gps");
    step.snapshot.gps = GpsPoint{gps.at(0).get<double>(), gps.at(1).get<double>()};
    step.snapshot.free_memory_mb = line.at("freeMemoryMb").get<std::int64_t>();
    step.snapshot.user_presence =
        presence_from_string(line.at("userPresence").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad trace line: ") + e.what());
  }
  step.snapshot.check();
  return step;
}

inline nlohmann::ordered_json trace_step_to_json(const TraceStep& step) {
  nlohmann::ordered_json line;
  line["t"] = step.offset.count();
  line["batteryPercent"] = step.snapshot.battery_percent;
  line["charging"] = step.snapshot.charging;
  line["networkType"] = std::string(to_string(step.snapshot.network_type));
  line["gps"] = {step.snapshot.gps.latitude, step.snapshot.gps.longitude};
  line["freeMemoryMb"] = step.snapshot.free_memory_mb;
  line["userPresence"] = std::string(to_string(step.snapshot.user_presence));
  return line;
}

/// Parses a JSON-lines snapshot script. Offsets must be non-decreasing.
inline std::vector<TraceStep> parse_trace(std::istream& in) {
  std::vector<TraceStep> steps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      throw ConfigError("trace line " + std::to_string(line_no) + " is not JSON");
    }
    TraceStep step = trace_step_from_json(parsed);
    if (!steps.empty() && step.offset < steps.back().offset) {
      throw ConfigError("trace offsets must be non-decreasing (line " + std::to_string(line_no) +
                        ")");
    }
    steps.push_back(step);
  }
  return steps;
}

inline std::vector<TraceStep> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace " + path);
  return parse_trace(in);
}

/// Seeded random-walk snapshot source for simulation runs without a scripted
/// trace. Deterministic for a fixed seed.
class SnapshotGenerator {
public:
  explicit SnapshotGenerator(std::uint64_t seed) : state_(seed ? seed : 1) {}

  ContextSnapshot next(Instant clock) {
    ContextSnapshot s = current_;
    s.clock = clock;
    // Random walk: battery drains, occasionally charges; the rest flips with
    // small probability.
    if (roll(100) < 30) s.battery_percent = std::max(0, s.battery_percent - 1);
    if (roll(100) < 5) s.charging = !s.charging;
    if (s.charging && roll(100) < 50) s.battery_percent = std::min(100, s.battery_percent + 1);
    if (roll(100) < 10) {
      constexpr NetworkType nets[] = {NetworkType::WiFi, NetworkType::GSM, NetworkType::WiMAX,
                                      NetworkType::None};
      s.network_type = nets[roll(4)];
    }
    if (roll(100) < 40) {
      s.gps.latitude += (static_cast<double>(roll(200)) - 100.0) / 10000.0;
      s.gps.longitude += (static_cast<double>(roll(200)) - 100.0) / 10000.0;
      s.gps.latitude = std::min(90.0, std::max(-90.0, s.gps.latitude));
      s.gps.longitude = std::min(180.0, std::max(-180.0, s.gps.longitude));
    }
    if (roll(100) < 20) s.free_memory_mb = 256 + static_cast<long long>(roll(2048));
    if (roll(100) < 10) {
      constexpr UserPresence states[] = {UserPresence::Available, UserPresence::Busy,
                                         UserPresence::Away};
      s.user_presence = states[roll(3)];
    }
    current_ = s;
    return s;
  }

private:
  // splitmix64: cross-platform deterministic, unlike the std distributions.
  std::uint64_t roll(std::uint64_t bound) {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z % bound;
  }

  std::uint64_t state_;
  ContextSnapshot current_{80, false, NetworkType::WiFi, GpsPoint{22.52, 75.92}, 1024,
                           UserPresence::Available, Instant{}};
};

} // namespace mobidesc
