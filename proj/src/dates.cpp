#include "ghpaudit/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace ghpaudit {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

std::optional<int> to_int(std::string_view s) {
    if (!all_digits(s))
        return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
    text = trim(text);
    // YYYY-MM or YYYY-MM-DD
    if (text.size() != 7 && text.size() != 10)
        return std::nullopt;
    if (text[4] != '-')
        return std::nullopt;
    auto year = to_int(text.substr(0, 4));
    auto month = to_int(text.substr(5, 2));
    if (!year || !month)
        return std::nullopt;
    int day = 1;
    if (text.size() == 10) {
        if (text[7] != '-')
            return std::nullopt;
        auto d = to_int(text.substr(8, 2));
        if (!d)
            return std::nullopt;
        day = *d;
    }
    Date date = make_date(*year, static_cast<unsigned>(*month), static_cast<unsigned>(day));
    if (!date.ok())
        return std::nullopt;
    return date;
}

std::optional<Timestamp> parse_iso_timestamp(std::string_view text) {
    text = trim(text);
    if (text.size() < 10)
        return std::nullopt;

    auto date = parse_iso_date(text.substr(0, 10));
    if (!date || text.substr(0, 10).size() != 10)
        return std::nullopt;
    if (text.size() == 10)
        return at_midnight_utc(*date);

    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ')
        return std::nullopt;
    std::string_view rest = text.substr(11);
    if (rest.size() < 8 || rest[2] != ':' || rest[5] != ':')
        return std::nullopt;
    auto hh = to_int(rest.substr(0, 2));
    auto mm = to_int(rest.substr(3, 2));
    auto ss = to_int(rest.substr(6, 2));
    if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 60)
        return std::nullopt;
    if (*ss == 60)  // leap second: clamp
        ss = 59;
    rest.remove_prefix(8);

    // Fractional seconds: truncate.
    if (!rest.empty() && (rest[0] == '.' || rest[0] == ',')) {
        rest.remove_prefix(1);
        while (!rest.empty() && rest[0] >= '0' && rest[0] <= '9')
            rest.remove_prefix(1);
    }

    std::int64_t offset_seconds = 0;
    if (!rest.empty()) {
        if (rest == "Z" || rest == "z") {
            rest = {};
        } else if (rest[0] == '+' || rest[0] == '-') {
            int sign = rest[0] == '+' ? 1 : -1;
            rest.remove_prefix(1);
            std::optional<int> oh, om;
            if (rest.size() == 5 && rest[2] == ':') {
                oh = to_int(rest.substr(0, 2));
                om = to_int(rest.substr(3, 2));
            } else if (rest.size() == 4) {
                oh = to_int(rest.substr(0, 2));
                om = to_int(rest.substr(2, 2));
            } else if (rest.size() == 2) {
                oh = to_int(rest);
                om = 0;
            }
            if (!oh || !om || *oh > 23 || *om > 59)
                return std::nullopt;
            offset_seconds = sign * (*oh * 3600LL + *om * 60LL);
            rest = {};
        } else {
            return std::nullopt;
        }
    }

    std::chrono::sys_days days{*date};
    std::int64_t total = std::chrono::duration_cast<std::chrono::seconds>(days.time_since_epoch()).count();
    total += *hh * 3600LL + *mm * 60LL + *ss;
    total -= offset_seconds;  // local = utc + offset
    return Timestamp{std::chrono::seconds{total}};
}

std::optional<Timestamp> parse_rfc1123(std::string_view text) {
    // "Sun, 06 Nov 1994 08:49:37 GMT"
    text = trim(text);
    auto comma = text.find(',');
    if (comma == std::string_view::npos)
        return std::nullopt;
    std::string_view rest = trim(text.substr(comma + 1));
    // DD Mon YYYY HH:MM:SS GMT
    if (rest.size() < 20)
        return std::nullopt;
    auto day = to_int(rest.substr(0, 2));
    if (!day || rest[2] != ' ')
        return std::nullopt;
    static constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                                 "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    std::string_view mon = rest.substr(3, 3);
    unsigned month = 0;
    for (unsigned i = 0; i < kMonths.size(); ++i) {
        if (mon == kMonths[i]) {
            month = i + 1;
            break;
        }
    }
    if (month == 0 || rest[6] != ' ')
        return std::nullopt;
    auto year = to_int(rest.substr(7, 4));
    if (!year || rest[11] != ' ')
        return std::nullopt;
    std::string_view clock = rest.substr(12, 8);
    if (clock.size() != 8 || clock[2] != ':' || clock[5] != ':')
        return std::nullopt;
    auto hh = to_int(clock.substr(0, 2));
    auto mm = to_int(clock.substr(3, 2));
    auto ss = to_int(clock.substr(6, 2));
    if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 60)
        return std::nullopt;
    if (*ss == 60)
        ss = 59;
    std::string_view zone = trim(rest.substr(20));
    if (zone != "GMT" && zone != "UTC")
        return std::nullopt;
    Date date = make_date(*year, month, static_cast<unsigned>(*day));
    if (!date.ok())
        return std::nullopt;
    std::chrono::sys_days days{date};
    std::int64_t total = std::chrono::duration_cast<std::chrono::seconds>(days.time_since_epoch()).count();
    total += *hh * 3600LL + *mm * 60LL + *ss;
    return Timestamp{std::chrono::seconds{total}};
}

Date to_utc_date(Timestamp ts) {
    auto days = std::chrono::floor<std::chrono::days>(ts);
    return Date{days};
}

Timestamp at_midnight_utc(Date d) {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::sys_days{d});
}

std::int64_t days_between(Date from, Date to) {
    return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

int month_index(Date d) {
    return static_cast<int>(d.year()) * 12 + static_cast<int>(static_cast<unsigned>(d.month())) - 1;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::string format_timestamp(Timestamp ts) {
    auto days = std::chrono::floor<std::chrono::days>(ts);
    Date date{days};
    auto secs = (ts - days).count();
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                  static_cast<long long>(secs % 60));
    return buf;
}

std::string format_year_month(int month_idx) {
    int year = month_idx / 12;
    int month = month_idx % 12;
    if (month < 0) {
        month += 12;
        --year;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month + 1);
    return buf;
}

Timestamp now_utc() {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace ghpaudit
