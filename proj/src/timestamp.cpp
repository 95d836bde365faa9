#include "pdtrade/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace pdtrade {

namespace {

int read_digits(std::string_view text, std::size_t& pos, std::size_t count) {
    if (pos + count > text.size()) throw TimestampError("timestamp too short: '" + std::string(text) + "'");
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
    if (ec != std::errc{} || ptr != text.data() + pos + count) {
        throw TimestampError("bad digits in timestamp '" + std::string(text) + "'");
    }
    pos += count;
    return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw TimestampError("expected '" + std::string(1, c) + "' in timestamp '" + std::string(text) + "'");
    }
    ++pos;
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second,
                         std::optional<int> utc_offset_minutes) {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) throw TimestampError("invalid calendar date");
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
        throw TimestampError("invalid time of day");
    }
    const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
    return Timestamp{std::int64_t{days_since_epoch} * 86400 + hour * 3600 + minute * 60 + second, utc_offset_minutes};
}

Timestamp parse_timestamp(std::string_view text) {
    std::size_t pos = 0;
    const int year = read_digits(text, pos, 4);
    expect(text, pos, '-');
    const int month = read_digits(text, pos, 2);
    expect(text, pos, '-');
    const int day = read_digits(text, pos, 2);
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) {
        throw TimestampError("expected date/time separator in '" + std::string(text) + "'");
    }
    ++pos;
    const int hour = read_digits(text, pos, 2);
    expect(text, pos, ':');
    const int minute = read_digits(text, pos, 2);
    int second = 0;
    if (pos < text.size() && text[pos] == ':') {
        ++pos;
        second = read_digits(text, pos, 2);
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        }
    }
    std::optional<int> offset;
    if (pos < text.size()) {
        if (text[pos] == 'Z') {
            offset = 0;
            ++pos;
        } else if (text[pos] == '+' || text[pos] == '-') {
            const int sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            const int oh = read_digits(text, pos, 2);
            if (pos < text.size() && text[pos] == ':') ++pos;
            const int om = read_digits(text, pos, 2);
            if (oh > 23 || om > 59) throw TimestampError("invalid UTC offset in '" + std::string(text) + "'");
            offset = sign * (oh * 60 + om);
        }
    }
    if (pos != text.size()) throw TimestampError("trailing characters in timestamp '" + std::string(text) + "'");
    if (month < 1 || day < 1) throw TimestampError("invalid calendar date '" + std::string(text) + "'");
    return make_timestamp(year, static_cast<unsigned>(month), static_cast<unsigned>(day), hour, minute, second,
                          offset);
}

std::string format_timestamp(const Timestamp& ts) {
    using namespace std::chrono;
    const std::int64_t days = ts.local_seconds >= 0 ? ts.local_seconds / 86400 : (ts.local_seconds - 86399) / 86400;
    const std::int64_t secs = ts.local_seconds - days * 86400;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                          static_cast<int>(secs / 3600), static_cast<int>(secs % 3600 / 60),
                          static_cast<int>(secs % 60));
    std::string out(buf, static_cast<std::size_t>(n));
    if (ts.utc_offset_minutes) {
        const int off = *ts.utc_offset_minutes;
        if (off == 0) {
            out += 'Z';
        } else {
            const int a = off < 0 ? -off : off;
            n = std::snprintf(buf, sizeof buf, "%c%02d:%02d", off < 0 ? '-' : '+', a / 60, a % 60);
            out.append(buf, static_cast<std::size_t>(n));
        }
    }
    return out;
}

}  // namespace pdtrade
