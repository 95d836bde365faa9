#pragma once

// Long-only simulation with a trailing stop, the buy-and-hold baseline, and
// the equity-curve metrics.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdtrade/pdt.hpp"
#include "pdtrade/timestamp.hpp"

namespace pdtrade {

/// One row of the results table.
struct SignalRow {
    Timestamp timestamp;
    std::optional<Label> actual;  ///< empty when the horizon runs past the data
    Label predicted = 0;
    double close = 0;

    friend bool operator==(const SignalRow&, const SignalRow&) = default;
};

enum class FillMode {
    Close,      ///< exits fill at the bar's close
    StopLevel,  ///< stop-outs fill at the stop level, signal exits at the close
};

struct SimulationConfig {
    double initial_balance = 10000.0;
    double trail = 0.005;
    FillMode fill = FillMode::Close;
    /// Charged on every fill as a fraction of traded notional.
    double cost_rate = 0.0;

    void validate() const;
};

struct PortfolioState {
    double balance = 0;
    long long positions = 0;
    std::optional<double> entry_price;
    std::optional<double> trailing_stop;
};

struct Trade {
    std::size_t entry_index = 0;
    std::size_t exit_index = 0;
    double entry_price = 0;
    double exit_price = 0;
    long long shares = 0;
    double profit = 0;
    bool stopped_out = false;
};

struct BacktestResult {
    Eigen::VectorXd portfolio;          ///< P_t after each bar
    std::vector<PortfolioState> states;  ///< state after each bar's decisions
    std::vector<Trade> trades;
    double initial_balance = 0;
    double final_balance = 0;
    std::size_t trade_count = 0;
    std::size_t successful_trades = 0;
    double growth_pct = 0;
    double max_drawdown_pct = 0;
    double trading_accuracy_pct = 0;
    bool no_trades = false;
    std::optional<std::string> warning;
};

class DataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

BacktestResult simulate(std::span<const SignalRow> rows, const SimulationConfig& cfg = {});

/// Buys floor(balance / first close) shares at the first bar and sells at the last.
BacktestResult buy_and_hold(std::span<const double> closes, double initial_balance = 10000.0);

/// (V_final - V_initial) / V_initial * 100.
double growth_pct(double initial, double final_value);
double growth_pct(const Eigen::Ref<const Eigen::VectorXd>& series, double initial);

/// Running-peak drawdown in percent at every bar.
Eigen::VectorXd drawdown_series(const Eigen::Ref<const Eigen::VectorXd>& series);
double max_drawdown(const Eigen::Ref<const Eigen::VectorXd>& series);

struct Accuracy {
    double pct = 0;
    bool no_trades = false;
};
Accuracy trading_accuracy(std::size_t trade_count, std::size_t successful_trades);

/// Header: Datetime,Actual,Predicted,Close
std::string write_results_csv(std::span<const SignalRow> rows);
std::vector<SignalRow> read_results_csv(std::string_view text);

}  // namespace pdtrade
