#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ghpaudit {

// Calendar date with day precision, always UTC.
using Date = std::chrono::year_month_day;
// Instant with second precision, always UTC.
using Timestamp = std::chrono::sys_seconds;

inline Date make_date(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

// Accepts "YYYY-MM-DD" and month-precision "YYYY-MM" (normalized to the
// first day of the month). Rejects invalid calendar dates.
std::optional<Date> parse_iso_date(std::string_view text);

// ISO-8601 instant: "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds
// (truncated) and "Z" or "+HH:MM"/"-HH:MM" offset. A bare date is read as
// midnight UTC. A missing offset is treated as UTC.
std::optional<Timestamp> parse_iso_timestamp(std::string_view text);

// HTTP / Memento-Datetime format: "Sun, 06 Nov 1994 08:49:37 GMT".
std::optional<Timestamp> parse_rfc1123(std::string_view text);

Date to_utc_date(Timestamp ts);
Timestamp at_midnight_utc(Date d);

// Signed whole days from one calendar date to another.
std::int64_t days_between(Date from, Date to);

// year*12 + (month-1); used for calendar month arithmetic.
int month_index(Date d);

std::string format_date(Date d);                 // YYYY-MM-DD
std::string format_timestamp(Timestamp ts);      // YYYY-MM-DDTHH:MM:SSZ
std::string format_year_month(int month_idx);    // YYYY-MM

Timestamp now_utc();

}  // namespace ghpaudit
