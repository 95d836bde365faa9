#include "pdtrade/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace pdtrade {

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("train_fraction must be in (0, 1)");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (chunk_size && !(static_cast<double>(*chunk_size) > static_cast<double>(horizon) / (1.0 - train_fraction))) {
        throw std::invalid_argument("chunk_size must exceed horizon / (1 - train_fraction)");
    }
}

namespace {

struct Columns {
    std::size_t datetime, open, high, low, close, count;
};

Columns locate_columns(std::string_view header) {
    const auto fields = csv::split(header);
    auto find = [&](std::initializer_list<std::string_view> names) -> std::size_t {
        for (std::string_view name : names) {
            const auto it = std::find(fields.begin(), fields.end(), name);
            if (it != fields.end()) return static_cast<std::size_t>(it - fields.begin());
        }
        throw ParseError(1, "header is missing column '" + std::string(*names.begin()) + "'");
    };
    return Columns{find({"Datetime", "Time"}), find({"Open"}), find({"High"}), find({"Low"}), find({"Close"}),
                   fields.size()};
}

Candle parse_row(std::string_view line, std::size_t line_no, const Columns& cols) {
    const auto fields = csv::split(line);
    if (fields.size() < cols.count) {
        throw ParseError(line_no, "expected " + std::to_string(cols.count) + " fields, found " +
                                      std::to_string(fields.size()));
    }
    Candle c;
    try {
        c.timestamp = parse_timestamp(fields[cols.datetime]);
    } catch (const TimestampError& e) {
        throw ParseError(line_no, e.what());
    }
    c.open = csv::parse_double(fields[cols.open], line_no, "Open");
    c.high = csv::parse_double(fields[cols.high], line_no, "High");
    c.low = csv::parse_double(fields[cols.low], line_no, "Low");
    c.close = csv::parse_double(fields[cols.close], line_no, "Close");
    return c;
}

void validate_candle(const Candle& c, const Candle* previous, std::size_t line_no) {
    if (!(c.open > 0 && c.high > 0 && c.low > 0 && c.close > 0)) throw ValidationError(line_no, "prices must be positive");
    if (c.high < c.low) throw ValidationError(line_no, "High is below Low");
    if (c.low > std::min(c.open, c.close)) throw ValidationError(line_no, "Low is above Open or Close");
    if (c.high < std::max(c.open, c.close)) throw ValidationError(line_no, "High is below Open or Close");
    if (previous && c.timestamp.utc_seconds() <= previous->timestamp.utc_seconds()) {
        throw ValidationError(line_no, "timestamp " + format_timestamp(c.timestamp) + " does not follow " +
                                           format_timestamp(previous->timestamp));
    }
}

}  // namespace

std::vector<Candle> parse_candles(std::string_view text, const CandleParseOptions& options,
                                  std::vector<std::string>* dropped) {
    const auto lines = csv::lines(text);
    if (lines.empty()) throw ParseError(1, "missing header");
    const Columns cols = locate_columns(lines.front());

    std::vector<Candle> candles;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (csv::trim(lines[i]).empty()) continue;
        try {
            Candle c = parse_row(lines[i], line_no, cols);
            validate_candle(c, candles.empty() ? nullptr : &candles.back(), line_no);
            candles.push_back(c);
        } catch (const ParseError& e) {
            if (!options.lenient) throw;
            if (dropped) dropped->push_back(e.what());
        }
    }
    return candles;
}

std::string write_candles(const std::vector<Candle>& candles) {
    std::string out = "Datetime,Open,High,Low,Close\n";
    for (const Candle& c : candles) {
        out += format_timestamp(c.timestamp);
        for (double v : {c.open, c.high, c.low, c.close}) {
            out += ',';
            out += csv::format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::pair<IndexRange, IndexRange> temporal_split(std::size_t n_rows, const SplitSpec& spec) {
    spec.validate();
    if (n_rows < 10) throw std::invalid_argument("temporal_split: need at least 10 rows, got " + std::to_string(n_rows));
    const auto cut = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n_rows)));
    return {IndexRange{0, cut}, IndexRange{cut, n_rows}};
}

IndexRange leakage_trim(IndexRange test, std::size_t horizon) {
    if (test.size() <= horizon) {
        throw std::invalid_argument("leakage_trim: test block of " + std::to_string(test.size()) +
                                    " rows leaves nothing after discarding " + std::to_string(horizon));
    }
    return IndexRange{test.begin + horizon, test.end};
}

SplitPlan plan_split(std::size_t n_rows, const SplitSpec& spec) {
    const auto [train, test] = temporal_split(n_rows, spec);
    return SplitPlan{train, test, leakage_trim(test, spec.horizon)};
}

std::vector<IndexRange> chunk(std::size_t n_rows, std::size_t size) {
    if (size < 1) throw std::invalid_argument("chunk: size must be >= 1");
    std::vector<IndexRange> out;
    for (std::size_t begin = 0; begin + size <= n_rows; begin += size) out.push_back(IndexRange{begin, begin + size});
    return out;
}

}  // namespace pdtrade
