#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace devrisk {

/// Calendar date (no time of day), serialized as `YYYY-MM-DD`.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Throws Error{MalformedInput} unless `text` is a valid ISO-8601 date.
    static Date parse(std::string_view text);

    std::chrono::sys_days days() const { return days_; }
    int year() const;

    std::string to_string() const;

    /// Signed number of days from `other` to this date.
    long days_since(const Date& other) const {
        return static_cast<long>((days_ - other.days_).count());
    }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

using Timestamp = std::chrono::system_clock::time_point;

/// RFC 3339 UTC rendering with second precision, e.g. `2021-06-01T12:00:00Z`.
std::string format_rfc3339(Timestamp ts);
Timestamp parse_rfc3339(std::string_view text);

}  // namespace devrisk
