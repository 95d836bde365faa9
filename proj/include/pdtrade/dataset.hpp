#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdtrade/csv.hpp"
#include "pdtrade/features.hpp"

namespace pdtrade {

/// A candle violates the OHLC invariants or arrives out of order.
class ValidationError : public ParseError {
public:
    using ParseError::ParseError;
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::size_t horizon = 50;
    std::optional<std::size_t> chunk_size;

    void validate() const;
};

struct SplitPlan {
    IndexRange train;
    IndexRange test;
    IndexRange evaluation;
};

struct CandleParseOptions {
    /// Drop malformed or invalid rows instead of failing.
    bool lenient = false;
};

/// Reads `Datetime,Open,High,Low,Close` rows (extra columns ignored; `Time`
/// is accepted in place of `Datetime`). Rejected rows are described in
/// `dropped` when lenient.
std::vector<Candle> parse_candles(std::string_view text, const CandleParseOptions& options = {},
                                  std::vector<std::string>* dropped = nullptr);

std::string write_candles(const std::vector<Candle>& candles);

/// Train is the leading floor(fraction * n) rows, test the remainder.
std::pair<IndexRange, IndexRange> temporal_split(std::size_t n_rows, const SplitSpec& spec = {});

/// Skips the first `horizon` test rows, whose timestamps overlap the label
/// look-ahead of the last training rows.
IndexRange leakage_trim(IndexRange test, std::size_t horizon);

SplitPlan plan_split(std::size_t n_rows, const SplitSpec& spec = {});

/// Consecutive full chunks; a shorter remainder is dropped.
std::vector<IndexRange> chunk(std::size_t n_rows, std::size_t size = 3225);

}  // namespace pdtrade
