#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "mobidesc/core/errors.hpp"

namespace mobidesc {

using DurationMs = std::chrono::milliseconds;

/// A UTC wall-clock instant with millisecond precision. Document timestamps,
/// fetch instants, and the simulation clock all use this type; arithmetic
/// against DurationMs gives ages and windows.
class Instant {
public:
  constexpr Instant() = default;

  static constexpr Instant from_millis(std::int64_t ms) { return Instant{ms}; }

  constexpr std::int64_t millis() const { return millis_; }

  friend constexpr auto operator<=>(Instant, Instant) = default;

  friend constexpr DurationMs operator-(Instant a, Instant b) {
    return DurationMs{a.millis_ - b.millis_};
  }

  friend constexpr Instant operator+(Instant a, DurationMs d) {
    return Instant{a.millis_ + d.count()};
  }

  friend constexpr Instant operator-(Instant a, DurationMs d) {
    return Instant{a.millis_ - d.count()};
  }

  /// Formats as ISO-8601 UTC with milliseconds: 2015-06-01T12:00:00.000Z
  std::string to_iso8601() const;

  /// Parses the exact format produced by to_iso8601. Throws BadTimestamp.
  static Instant parse_iso8601(std::string_view text);

private:
  constexpr explicit Instant(std::int64_t ms) : millis_(ms) {}
  std::int64_t millis_ = 0;
};

namespace detail {

// Civil-time conversions on the proleptic Gregorian calendar.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);               // [0, 146096]
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365; // [0, 399]
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);               // [0, 365]
  const unsigned mp = (5 * doy + 2) / 153;                                    // [0, 11]
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;                            // [1, 31]
  const unsigned m = mp + (mp < 10 ? 3 : -9);                                 // [1, 12]
  return CivilDate{y + (m <= 2), m, d};
}

constexpr bool is_leap_year(std::int64_t y) {
  return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap_year(y)) return 29;
  return lengths[m - 1];
}

} // namespace detail

inline std::string Instant::to_iso8601() const {
  std::int64_t ms = millis_;
  std::int64_t days = ms / 86'400'000;
  std::int64_t rem = ms % 86'400'000;
  if (rem < 0) {
    rem += 86'400'000;
    days -= 1;
  }
  const auto date = detail::civil_from_days(days);
  const int hh = static_cast<int>(rem / 3'600'000);
  const int mm = static_cast<int>(rem / 60'000 % 60);
  const int ss = static_cast<int>(rem / 1'000 % 60);
  const int mss = static_cast<int>(rem % 1'000);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<long long>(date.year), date.month, date.day, hh, mm, ss, mss);
  return buf;
}

inline Instant Instant::parse_iso8601(std::string_view text) {
  // Fixed-width format: YYYY-MM-DDThh:mm:ss.mmmZ (24 chars).
  auto fail = [&]() -> Instant {
    throw BadTimestamp("bad timestamp: '" + std::string(text) + "'");
  };
  if (text.size() != 24) return fail();
  auto digit = [&](std::size_t i) -> int {
    const char c = text[i];
    if (c < '0' || c > '9') throw BadTimestamp("bad timestamp: '" + std::string(text) + "'");
    return c - '0';
  };
  auto expect = [&](std::size_t i, char c) {
    if (text[i] != c) throw BadTimestamp("bad timestamp: '" + std::string(text) + "'");
  };
  expect(4, '-');
  expect(7, '-');
  expect(10, 'T');
  expect(13, ':');
  expect(16, ':');
  expect(19, '.');
  expect(23, 'Z');
  const std::int64_t year = digit(0) * 1000 + digit(1) * 100 + digit(2) * 10 + digit(3);
  const unsigned month = static_cast<unsigned>(digit(5) * 10 + digit(6));
  const unsigned day = static_cast<unsigned>(digit(8) * 10 + digit(9));
  const int hh = digit(11) * 10 + digit(12);
  const int mm = digit(14) * 10 + digit(15);
  const int ss = digit(17) * 10 + digit(18);
  const int mss = digit(20) * 100 + digit(21) * 10 + digit(22);
  if (month < 1 || month > 12) return fail();
  if (day < 1 || day > detail::days_in_month(year, month)) return fail();
  if (hh > 23 || mm > 59 || ss > 59) return fail();
  const std::int64_t days = detail::days_from_civil(year, month, day);
  return Instant::from_millis(((days * 24 + hh) * 60 + mm) * 60'000 + ss * 1'000 + mss);
}

} // namespace mobidesc
