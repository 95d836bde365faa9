#include "pdtrade/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "pdtrade/csv.hpp"

namespace pdtrade {

namespace {

constexpr std::string_view kResultsHeader = "Datetime,Actual,Predicted,Close";

/// Whole shares affordable at `price` including costs; never overspends.
long long affordable_shares(double balance, double price, double cost_rate) {
    const double unit = price * (1.0 + cost_rate);
    auto shares = static_cast<long long>(std::floor(balance / unit));
    while (shares > 0 && static_cast<double>(shares) * price + static_cast<double>(shares) * price * cost_rate > balance) {
        --shares;
    }
    return std::max(shares, 0LL);
}

void finalize(BacktestResult& r) {
    r.growth_pct = growth_pct(r.initial_balance, r.final_balance);
    r.max_drawdown_pct = r.portfolio.size() > 0 ? max_drawdown(r.portfolio) : 0.0;
    const Accuracy acc = trading_accuracy(r.trade_count, r.successful_trades);
    r.trading_accuracy_pct = acc.pct;
    r.no_trades = acc.no_trades;
}

}  // namespace

void SimulationConfig::validate() const {
    if (!(initial_balance > 0)) throw std::invalid_argument("initial_balance must be positive");
    if (!(trail > 0 && trail < 1)) throw std::invalid_argument("trail must lie in (0, 1)");
    if (!(cost_rate >= 0 && cost_rate < 1)) throw std::invalid_argument("cost_rate must lie in [0, 1)");
}

BacktestResult simulate(std::span<const SignalRow> rows, const SimulationConfig& cfg) {
    cfg.validate();
    if (rows.empty()) throw std::invalid_argument("simulate: no rows");

    BacktestResult result;
    result.initial_balance = cfg.initial_balance;
    result.portfolio.resize(static_cast<Eigen::Index>(rows.size()));
    result.states.reserve(rows.size());

    PortfolioState s{cfg.initial_balance, 0, std::nullopt, std::nullopt};
    std::size_t entry_index = 0;
    double price = 0;

    for (std::size_t t = 0; t < rows.size(); ++t) {
        const Label pred = rows[t].predicted;
        price = rows[t].close;
        if (!(price > 0) || !std::isfinite(price)) {
            throw DataError("simulate: non-positive price at row " + std::to_string(t));
        }

        if (pred == 1 && s.positions == 0) {
            const long long shares = affordable_shares(s.balance, price, cfg.cost_rate);
            if (shares > 0) {
                const double notional = static_cast<double>(shares) * price;
                s.positions = shares;
                s.entry_price = price;
                s.balance -= notional + notional * cfg.cost_rate;
                s.trailing_stop = price * (1.0 - cfg.trail);
                entry_index = t;
            }
        }

        if (s.positions > 0) {
            s.trailing_stop = std::max(*s.trailing_stop, price * (1.0 - cfg.trail));
            const bool stopped = price <= *s.trailing_stop;
            if (stopped || pred == 0) {
                const double fill = (stopped && cfg.fill == FillMode::StopLevel) ? *s.trailing_stop : price;
                const double shares = static_cast<double>(s.positions);
                const double cost = shares * fill * cfg.cost_rate + shares * *s.entry_price * cfg.cost_rate;
                const double profit = shares * (fill - *s.entry_price) - cost;
                s.balance += shares * fill - shares * fill * cfg.cost_rate;
                ++result.trade_count;
                if (profit > 0) ++result.successful_trades;
                result.trades.push_back(Trade{entry_index, t, *s.entry_price, fill, s.positions, profit, stopped});
                s.positions = 0;
                s.entry_price.reset();
                s.trailing_stop.reset();
            }
        }

        result.portfolio(static_cast<Eigen::Index>(t)) = s.balance + static_cast<double>(s.positions) * price;
        result.states.push_back(s);
    }

    // The closing liquidation settles the books but is not scored as a trade.
    if (s.positions > 0) {
        const double shares = static_cast<double>(s.positions);
        const double cost = shares * price * cfg.cost_rate + shares * *s.entry_price * cfg.cost_rate;
        s.balance += shares * price - shares * price * cfg.cost_rate;
        result.trades.push_back(Trade{entry_index, rows.size() - 1, *s.entry_price, price, s.positions,
                                      shares * (price - *s.entry_price) - cost, false});
        s.positions = 0;
    }
    result.final_balance = s.balance;
    finalize(result);
    return result;
}

BacktestResult buy_and_hold(std::span<const double> closes, double initial_balance) {
    if (closes.empty()) throw std::invalid_argument("buy_and_hold: no prices");
    if (!(initial_balance > 0)) throw std::invalid_argument("initial_balance must be positive");
    for (double c : closes) {
        if (!(c > 0) || !std::isfinite(c)) throw DataError("buy_and_hold: non-positive price");
    }

    BacktestResult result;
    result.initial_balance = initial_balance;
    const long long shares = affordable_shares(initial_balance, closes.front(), 0.0);
    const double balance = initial_balance - static_cast<double>(shares) * closes.front();
    if (shares == 0) {
        result.warning = "first close " + csv::format_double(closes.front()) + " exceeds the initial balance; holding cash";
    }

    result.portfolio.resize(static_cast<Eigen::Index>(closes.size()));
    for (std::size_t t = 0; t < closes.size(); ++t) {
        PortfolioState s{balance, shares, std::nullopt, std::nullopt};
        if (shares > 0) s.entry_price = closes.front();
        result.portfolio(static_cast<Eigen::Index>(t)) = balance + static_cast<double>(shares) * closes[t];
        result.states.push_back(s);
    }
    result.final_balance = balance + static_cast<double>(shares) * closes.back();
    if (shares > 0) {
        result.trades.push_back(Trade{0, closes.size() - 1, closes.front(), closes.back(), shares,
                                      static_cast<double>(shares) * (closes.back() - closes.front()), false});
    }
    finalize(result);
    return result;
}

double growth_pct(double initial, double final_value) {
    if (!(initial > 0)) throw std::invalid_argument("growth_pct: initial value must be positive");
    return (final_value - initial) / initial * 100.0;
}

double growth_pct(const Eigen::Ref<const Eigen::VectorXd>& series, double initial) {
    if (series.size() == 0) throw std::invalid_argument("growth_pct: empty series");
    return growth_pct(initial, series(series.size() - 1));
}

Eigen::VectorXd drawdown_series(const Eigen::Ref<const Eigen::VectorXd>& series) {
    if (series.size() == 0) throw std::invalid_argument("drawdown_series: empty series");
    Eigen::VectorXd dd(series.size());
    double peak = series(0);
    for (Eigen::Index t = 0; t < series.size(); ++t) {
        if (!(series(t) > 0)) throw std::invalid_argument("drawdown_series: values must be positive");
        peak = std::max(peak, series(t));
        dd(t) = (peak - series(t)) / peak * 100.0;
    }
    return dd;
}

double max_drawdown(const Eigen::Ref<const Eigen::VectorXd>& series) {
    return drawdown_series(series).maxCoeff();
}

Accuracy trading_accuracy(std::size_t trade_count, std::size_t successful_trades) {
    if (successful_trades > trade_count) throw std::invalid_argument("trading_accuracy: more wins than trades");
    if (trade_count == 0) return Accuracy{0.0, true};
    return Accuracy{static_cast<double>(successful_trades) / static_cast<double>(trade_count) * 100.0, false};
}

std::string write_results_csv(std::span<const SignalRow> rows) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const SignalRow& r : rows) {
        out += format_timestamp(r.timestamp);
        out += ',';
        if (r.actual) out += static_cast<char>('0' + *r.actual);
        out += ',';
        out += static_cast<char>('0' + r.predicted);
        out += ',';
        out += csv::format_double(r.close);
        out += '\n';
    }
    return out;
}

std::vector<SignalRow> read_results_csv(std::string_view text) {
    const auto lines = csv::lines(text);
    if (lines.empty() || csv::trim(lines.front()) != kResultsHeader) {
        throw ParseError(1, "expected header '" + std::string(kResultsHeader) + "'");
    }
    auto parse_label = [](std::string_view f, std::size_t line_no, std::string_view column) -> Label {
        if (f == "0") return 0;
        if (f == "1") return 1;
        throw ParseError(line_no, std::string(column) + " must be 0 or 1, got '" + std::string(f) + "'");
    };
    std::vector<SignalRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (csv::trim(lines[i]).empty()) continue;
        const auto fields = csv::split(lines[i]);
        if (fields.size() != 4) throw ParseError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        SignalRow row;
        try {
            row.timestamp = parse_timestamp(fields[0]);
        } catch (const TimestampError& e) {
            throw ParseError(line_no, e.what());
        }
        if (!fields[1].empty()) row.actual = parse_label(fields[1], line_no, "Actual");
        row.predicted = parse_label(fields[2], line_no, "Predicted");
        row.close = csv::parse_double(fields[3], line_no, "Close");
        if (!(row.close > 0)) throw ParseError(line_no, "Close must be positive");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pdtrade
