#include <gtest/gtest.h>

#include <random>

#include "pdtrade/backtest.hpp"
#include "pdtrade/csv.hpp"

using namespace pdtrade;

namespace {

std::vector<SignalRow> stream(const std::vector<double>& closes, const std::vector<int>& preds) {
    std::vector<SignalRow> rows;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        rows.push_back({make_timestamp(2024, 10, 25, 9, 0), std::nullopt, static_cast<Label>(preds[i]), closes[i]});
        rows.back().timestamp.local_seconds += static_cast<std::int64_t>(i) * 300;
    }
    return rows;
}

SimulationConfig sim(double trail = 0.005) {
    SimulationConfig c;
    c.trail = trail;
    return c;
}

}  // namespace

TEST(Simulate, NeverEnters) {
    const auto r = simulate(stream({100, 90, 120}, {0, 0, 0}));
    EXPECT_EQ(r.trade_count, 0u);
    EXPECT_EQ(r.growth_pct, 0.0);
    EXPECT_TRUE(r.no_trades);
    EXPECT_TRUE((r.portfolio.array() == 10000.0).all());
}

TEST(Simulate, TrailingStopExit) {
    const auto r = simulate(stream({100, 101, 102, 99}, {1, 1, 1, 1}));
    ASSERT_EQ(r.trades.size(), 1u);
    EXPECT_EQ(r.trades[0].shares, 100);
    EXPECT_TRUE(r.trades[0].stopped_out);
    EXPECT_DOUBLE_EQ(*r.states[0].trailing_stop, 99.5);
    EXPECT_DOUBLE_EQ(*r.states[1].trailing_stop, 100.495);
    EXPECT_DOUBLE_EQ(*r.states[2].trailing_stop, 101.49);
    EXPECT_EQ(r.final_balance, 9900.0);
    EXPECT_DOUBLE_EQ(r.growth_pct, -1.0);
    EXPECT_EQ(r.trade_count, 1u);
    EXPECT_EQ(r.successful_trades, 0u);
}

TEST(Simulate, SignalExit) {
    const auto r = simulate(stream({100, 110}, {1, 0}));
    EXPECT_DOUBLE_EQ(r.growth_pct, 10.0);
    EXPECT_EQ(r.trade_count, 1u);
    EXPECT_DOUBLE_EQ(r.trading_accuracy_pct, 100.0);
}

TEST(Simulate, StopLevelFill) {
    auto cfg = sim();
    cfg.fill = FillMode::StopLevel;
    const auto r = simulate(stream({100, 101, 102, 99}, {1, 1, 1, 1}), cfg);
    EXPECT_DOUBLE_EQ(r.trades[0].exit_price, 101.49);
    EXPECT_DOUBLE_EQ(r.final_balance, 10149.0);
}

TEST(Simulate, FinalLiquidationIsNotATrade) {
    const auto r = simulate(stream({100, 101, 103}, {1, 1, 1}));
    EXPECT_EQ(r.trade_count, 0u);
    EXPECT_EQ(r.final_balance, 10300.0);
    EXPECT_EQ(r.trades.size(), 1u);
}

TEST(Simulate, Costs) {
    auto cfg = sim();
    cfg.cost_rate = 0.001;
    const auto r = simulate(stream({100, 110}, {1, 0}), cfg);
    // 99 shares: 100 would cost 10010
    EXPECT_EQ(r.trades[0].shares, 99);
    EXPECT_LT(r.final_balance, 10990.0);
}

TEST(Simulate, Errors) {
    EXPECT_THROW(simulate(stream({100, 0}, {1, 1})), DataError);
    EXPECT_THROW(simulate(stream({100}, {1}), sim(0.0)), std::invalid_argument);
    EXPECT_THROW(simulate(stream({100}, {1}), sim(1.0)), std::invalid_argument);
    EXPECT_THROW(simulate(std::vector<SignalRow>{}), std::invalid_argument);
}

TEST(SimulateProperty, Accounting) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
        std::vector<double> closes;
        std::vector<int> preds;
        double p = std::uniform_real_distribution<double>(5, 500)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            p *= 1.0 + std::normal_distribution<double>(0, 0.01)(rng);
            closes.push_back(std::round(p * 100) / 100 + 0.01);
            preds.push_back(std::uniform_int_distribution<int>(0, 3)(rng) > 0);
        }
        auto cfg = sim(std::uniform_real_distribution<double>(0.001, 0.05)(rng));
        const auto r = simulate(stream(closes, preds), cfg);
        std::optional<double> last_stop;
        for (std::size_t t = 0; t < n; ++t) {
            const auto& s = r.states[t];
            ASSERT_EQ(r.portfolio(static_cast<Eigen::Index>(t)), s.balance + static_cast<double>(s.positions) * closes[t]);
            ASSERT_GE(s.positions, 0);
            ASSERT_GE(s.balance, 0.0);
            if (s.trailing_stop) {
                if (last_stop) ASSERT_GE(*s.trailing_stop, *last_stop);
                last_stop = s.trailing_stop;
            } else {
                last_stop.reset();
            }
        }
        ASSERT_LE(r.successful_trades, r.trade_count);
        ASSERT_EQ(r.final_balance, r.portfolio(static_cast<Eigen::Index>(n - 1)));
    }
}

TEST(BuyAndHold, Examples) {
    EXPECT_DOUBLE_EQ(buy_and_hold(std::vector<double>{100, 120, 98}).growth_pct, -2.0);
    EXPECT_EQ(buy_and_hold(std::vector<double>{50, 50}).growth_pct, 0.0);
    const auto r = buy_and_hold(std::vector<double>{20000, 21000});
    EXPECT_EQ(r.growth_pct, 0.0);
    EXPECT_TRUE(r.warning);
}

TEST(BuyAndHoldProperty, MatchesAlwaysLongSimulation) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const double trail = std::uniform_real_distribution<double>(0.01, 0.2)(rng);
        std::vector<double> closes;
        double peak = std::uniform_real_distribution<double>(10, 400)(rng);
        closes.push_back(peak);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
        for (std::size_t i = 1; i < n; ++i) {
            // stay strictly above the running-peak stop
            const double floor = peak * (1 - trail) * 1.001;
            const double next = std::uniform_real_distribution<double>(floor, peak * 1.02)(rng);
            closes.push_back(next);
            peak = std::max(peak, next);
        }
        std::vector<int> preds(n, 1);
        const auto s = simulate(stream(closes, preds), sim(trail));
        const auto b = buy_and_hold(closes);
        ASSERT_EQ(s.trade_count, 0u);
        ASSERT_EQ(s.final_balance, b.final_balance);
        ASSERT_EQ(s.portfolio, b.portfolio);
    }
}

TEST(Metrics, Growth) {
    EXPECT_NEAR(growth_pct(10000, 10118.02), 1.1802, 1e-9);
    EXPECT_NEAR(growth_pct(10000, 9771), -2.29, 1e-9);
    EXPECT_EQ(growth_pct(Eigen::VectorXd::Constant(5, 7.0), 7.0), 0.0);
    EXPECT_THROW(growth_pct(0, 1), std::invalid_argument);
}

TEST(Metrics, Drawdown) {
    Eigen::VectorXd a(4), b(4);
    a << 100, 110, 99, 105;
    b << 100, 90, 95, 80;
    EXPECT_EQ(max_drawdown(a), 10.0);
    EXPECT_EQ(max_drawdown(b), 20.0);
    EXPECT_EQ(max_drawdown(Eigen::VectorXd::LinSpaced(10, 1, 10)), 0.0);
}

TEST(Metrics, Accuracy) {
    EXPECT_EQ(trading_accuracy(4, 3).pct, 75.0);
    EXPECT_EQ(trading_accuracy(1, 1).pct, 100.0);
    const auto none = trading_accuracy(0, 0);
    EXPECT_EQ(none.pct, 0.0);
    EXPECT_TRUE(none.no_trades);
}

TEST(ResultsCsv, ResultsTableSample) {
    const std::string text =
        "Datetime,Actual,Predicted,Close\n"
        "2024-10-25 13:25:00,0,0,1487.87\n"
        "2024-10-25 13:30:00,1,1,1488.50\n"
        "2024-10-25 13:35:00,0,0,1488.37\n"
        "2024-10-25 13:40:00,1,1,1488.45\n"
        "2024-10-25 13:45:00,0,0,1491.30\n";
    const auto rows = read_results_csv(text);
    ASSERT_EQ(rows.size(), 5u);
    const int actual[] = {0, 1, 0, 1, 0};
    const double close[] = {1487.87, 1488.50, 1488.37, 1488.45, 1491.30};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(rows[i].actual, actual[i]);
        EXPECT_EQ(rows[i].predicted, actual[i]);
        EXPECT_EQ(rows[i].close, close[i]);
    }
    EXPECT_EQ(rows[4].timestamp, make_timestamp(2024, 10, 25, 13, 45));
}

TEST(ResultsCsv, RoundTrip) {
    std::mt19937_64 rng(2);
    std::vector<SignalRow> rows;
    for (int i = 0; i < 300; ++i) {
        SignalRow r;
        r.timestamp = make_timestamp(2024, 3, 1, 0, 0, 0, i % 3 == 0 ? std::optional<int>(330) : std::nullopt);
        r.timestamp.local_seconds += i * 300;
        if (i % 7) r.actual = static_cast<Label>(i % 2);
        r.predicted = static_cast<Label>(rng() % 2);
        r.close = std::uniform_real_distribution<double>(1, 5000)(rng);
        rows.push_back(r);
    }
    const std::string text = write_results_csv(rows);
    EXPECT_EQ(read_results_csv(text), rows);
    EXPECT_EQ(write_results_csv(read_results_csv(text)), text);
}

TEST(ResultsCsv, BadRows) {
    EXPECT_THROW(read_results_csv("Datetime,Actual,Predicted,Close\n2024-10-25 13:25:00,0,2,1.0\n"), ParseError);
    EXPECT_THROW(read_results_csv("Datetime,Close\n"), ParseError);
}
