#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pdtrade {

/// Wall-clock time with an optional UTC offset. Naive timestamps (no offset)
/// are compared as if they were UTC.
struct Timestamp {
    std::int64_t local_seconds = 0;  ///< seconds since 1970-01-01T00:00:00 on the local wall clock
    std::optional<int> utc_offset_minutes;

    std::int64_t utc_seconds() const { return local_seconds - std::int64_t{utc_offset_minutes.value_or(0)} * 60; }

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

class TimestampError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Accepts `YYYY-MM-DD[T| ]HH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM|+HHMM]`.
/// Fractional seconds are truncated.
Timestamp parse_timestamp(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SS` followed by `Z` or `+HH:MM` when an offset is known.
std::string format_timestamp(const Timestamp& ts);

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second = 0,
                         std::optional<int> utc_offset_minutes = std::nullopt);

}  // namespace pdtrade
