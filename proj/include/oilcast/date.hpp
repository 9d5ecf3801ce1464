#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace oilcast {

/// Calendar day stored as a serial count of days since 1970-01-01.
/// Trading calendars are irregular, so no day arithmetic beyond ordering
/// is offered; non-trading days are simply absent rows.
class Date {
public:
    Date() = default;
    explicit Date(std::int64_t serial) : serial_(serial) {}

    // Parses strict ISO-8601 "YYYY-MM-DD"; throws IngestError otherwise.
    static Date parse(std::string_view text);
    static Date from_ymd(int year, int month, int day);

    std::int64_t serial() const { return serial_; }
    std::string to_string() const;

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t serial_ = 0;
};

} // namespace oilcast
