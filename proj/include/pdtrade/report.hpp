#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdtrade/backtest.hpp"
#include "pdtrade/timestamp.hpp"

namespace pdtrade {

/// `value` rounded to 4 decimals, never rendered as "-0.0000".
std::string format_pct(double value);

/// Strategy and baseline metrics plus their growth difference as a JSON
/// document with fixed key order; percentages carry four decimals.
std::string emit_metrics(const BacktestResult& strategy, const BacktestResult& baseline,
                         std::string_view instrument = {});

struct InstrumentSeries {
    std::string name;
    std::vector<Timestamp> timestamps;
    BacktestResult result;
};

struct AggregateMetrics {
    std::size_t instruments = 0;
    double mean_growth_pct = 0;
    std::vector<Timestamp> timestamps;
    Eigen::VectorXd mean_portfolio;
    /// Drawdown of the mean portfolio curve, not the mean of drawdowns.
    double max_drawdown_pct = 0;
};

class AlignmentError : public std::runtime_error {
public:
    AlignmentError(const std::string& what, std::vector<std::string> offenders)
        : std::runtime_error(what), offenders_(std::move(offenders)) {}

    const std::vector<std::string>& offenders() const { return offenders_; }

private:
    std::vector<std::string> offenders_;
};

double mean_growth(std::span<const InstrumentSeries> runs);

/// Mean growth and the pointwise mean portfolio. Every instrument must share
/// the first instrument's evaluation timestamps.
AggregateMetrics aggregate(std::span<const InstrumentSeries> runs);

std::string emit_aggregate(const AggregateMetrics& strategy, const AggregateMetrics& baseline);

}  // namespace pdtrade
