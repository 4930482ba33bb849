#include "devrisk/core/date.hpp"

#include <charconv>
#include <cstdio>

#include "devrisk/core/error.hpp"

namespace devrisk {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw Error(ErrorKind::MalformedInput, "invalid calendar date");
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
        !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
        throw Error(ErrorKind::MalformedInput, "expected YYYY-MM-DD date, got '" + std::string(text) + "'");
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw Error(ErrorKind::MalformedInput, "invalid calendar date '" + std::string(text) + "'");
    }
    return Date{std::chrono::sys_days{ymd}};
}

int Date::year() const {
    return static_cast<int>(std::chrono::year_month_day{days_}.year());
}

std::string Date::to_string() const {
    std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_rfc3339(Timestamp ts) {
    auto secs = std::chrono::floor<std::chrono::seconds>(ts);
    auto day = std::chrono::floor<std::chrono::days>(secs);
    std::chrono::year_month_day ymd{day};
    std::chrono::hh_mm_ss hms{secs - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
    // Accepts the form produced by format_rfc3339 (UTC, 'Z' suffix, optional fraction).
    if (text.size() < 20 || text[10] != 'T' || text.back() != 'Z') {
        throw Error(ErrorKind::MalformedInput, "expected RFC 3339 UTC timestamp, got '" + std::string(text) + "'");
    }
    Date date = Date::parse(text.substr(0, 10));
    int h = 0, m = 0, s = 0;
    if (text[13] != ':' || text[16] != ':' || !parse_int(text.substr(11, 2), h) ||
        !parse_int(text.substr(14, 2), m) || !parse_int(text.substr(17, 2), s) || h > 23 || m > 59 || s > 60) {
        throw Error(ErrorKind::MalformedInput, "malformed time in '" + std::string(text) + "'");
    }
    return Timestamp{date.days()} + std::chrono::hours{h} + std::chrono::minutes{m} + std::chrono::seconds{s};
}

}  // namespace devrisk
