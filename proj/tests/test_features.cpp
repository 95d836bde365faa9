#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pdtrade/features.hpp"
#include "pdtrade/indicators.hpp"

using namespace pdtrade;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

}  // namespace

TEST(SwingPoints, ConfirmedOneBarLater) {
    const auto s = swing_points(vec({1, 3, 2}), vec({3, 1, 2}));
    EXPECT_FALSE(is_defined(s.high(0)));
    EXPECT_FALSE(is_defined(s.high(1)));
    EXPECT_EQ(s.high(2), 3);
    EXPECT_FALSE(is_defined(s.low(1)));
    EXPECT_EQ(s.low(2), 1);
}

TEST(SwingPoints, MonotoneHasNoSwings) {
    const auto s = swing_points(vec({1, 2, 3, 4, 5}), vec({1, 2, 3, 4, 5}));
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_FALSE(is_defined(s.high(i)));
}

TEST(SwingPoints, EqualNeighboursAreNotSwings) {
    const auto s = swing_points(vec({1, 3, 3, 1}), vec({2, 2, 2, 2}));
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_FALSE(is_defined(s.high(i)));
}

TEST(MovingAverage, Examples) {
    EXPECT_DOUBLE_EQ(moving_average(vec({2, 4, 6}), 3)(2), 4.0);
    const auto ma = moving_average(vec({1, 2, 3, 4}), 2);
    EXPECT_FALSE(is_defined(ma(0)));
    EXPECT_EQ(ma(1), 1.5);
    EXPECT_EQ(ma(2), 2.5);
    EXPECT_EQ(ma(3), 3.5);
    const auto closes = vec({5, 7, 1, 9});
    EXPECT_EQ(moving_average(closes, 1), closes);
}

TEST(OrderBlock, Boundaries) {
    const auto flat = vec({100, 100, 100, 100, 100});
    EXPECT_EQ(order_block(flat, flat, flat)(4), 1.0);
    // range of 1% of the close
    EXPECT_EQ(order_block(vec({101, 101, 101, 101, 101}), vec({100, 100, 100, 100, 100}), flat)(4), 0.0);
    // range exactly pct * close is excluded
    const auto ones = vec({1, 1, 1, 1, 1});
    EXPECT_EQ(order_block(ones * 9.0, ones * 7.0, ones * 8.0, 5, 0.25)(4), 0.0);
    EXPECT_EQ(order_block(ones * 9.0, ones * 7.0, ones * 8.0, 5, 0.3)(4), 1.0);
    EXPECT_FALSE(is_defined(order_block(flat, flat, flat)(3)));
}

TEST(Rsi, Examples) {
    EXPECT_DOUBLE_EQ(rsi(vec({10, 11, 10, 12}), 3)(3), 75.0);
    EXPECT_EQ(rsi(vec({1, 2, 3, 4, 5}), 3)(4), 100.0);
    EXPECT_EQ(rsi(vec({10, 11, 10, 11, 10}), 4)(4), 50.0);
    EXPECT_EQ(rsi(vec({3, 3, 3, 3}), 3)(3), 50.0);
    EXPECT_FALSE(is_defined(rsi(vec({10, 11, 10, 12}), 3)(2)));
}

TEST(Labels, Definition) {
    Eigen::VectorXd c = Eigen::VectorXd::Constant(60, 100.0);
    c(50) = 101;
    const auto y = make_labels(c, 50);
    EXPECT_EQ(y[0], 1);
    EXPECT_EQ(y[1], 0);  // equal closes map to 0
    for (std::size_t t = 0; t < 60; ++t) EXPECT_EQ(y[t].has_value(), t <= 9) << t;
}

TEST(AssembleFeatures, InsufficientHistory) {
    const auto candles = fixtures::random_candles(49, 1);
    EXPECT_THROW(assemble_features(candles), InsufficientHistoryError);
    std::vector<Candle> flat;
    for (int i = 0; i < 120; ++i) flat.push_back({make_timestamp(2024, 1, 1, i / 60, i % 60), 10, 10, 10, 10});
    EXPECT_THROW(assemble_features(flat), InsufficientHistoryError);
}

TEST(AssembleFeatures, DiffIdentityAndRanges) {
    const auto frame = assemble_features(fixtures::random_candles(400, 2));
    ASSERT_GT(frame.rows(), 300u);
    for (Eigen::Index r = 0; r < frame.x.rows(); ++r) {
        EXPECT_EQ(frame.x(r, kMaDiff), frame.x(r, kMaShort) - frame.x(r, kMaLong));
        EXPECT_GE(frame.x(r, kRsi), 0.0);
        EXPECT_LE(frame.x(r, kRsi), 100.0);
        EXPECT_TRUE(frame.x(r, kOrderBlock) == 0.0 || frame.x(r, kOrderBlock) == 1.0);
        EXPECT_TRUE(frame.x.row(r).allFinite());
    }
}

TEST(AssembleFeatures, PrefixStable) {
    // Features at time t depend only on candles up to t.
    const auto candles = fixtures::random_candles(300, 3);
    const auto full = assemble_features(candles);
    for (std::size_t cut : {120u, 200u, 299u}) {
        const auto part = assemble_features(std::span<const Candle>(candles).first(cut));
        ASSERT_EQ(part.first_candle, full.first_candle);
        for (std::size_t r = 0; r < part.rows(); ++r) {
            EXPECT_EQ(part.x.row(static_cast<Eigen::Index>(r)), full.x.row(static_cast<Eigen::Index>(r)));
            EXPECT_EQ(part.timestamps[r], full.timestamps[r]);
        }
    }
}

TEST(AssembleFeatures, LabelsStableUnderAppending) {
    const auto candles = fixtures::random_candles(300, 4);
    const auto full = assemble_features(candles);
    const auto part = assemble_features(std::span<const Candle>(candles).first(250));
    for (std::size_t r = 0; r < part.rows(); ++r) {
        if (part.labels[r]) EXPECT_EQ(part.labels[r], full.labels[r]);
    }
    std::size_t unlabeled = 0;
    for (const auto& l : full.labels) unlabeled += !l.has_value();
    EXPECT_EQ(unlabeled, 50u);
}

TEST(AssembleFeatures, PriceScaling) {
    const auto candles = fixtures::random_candles(300, 5);
    const auto base = assemble_features(candles);
    for (double k : {2.0, 4.0}) {
        auto scaled = candles;
        for (auto& c : scaled) {
            c.open *= k;
            c.high *= k;
            c.low *= k;
            c.close *= k;
        }
        const auto f = assemble_features(scaled);
        ASSERT_EQ(f.rows(), base.rows());
        for (Eigen::Index r = 0; r < f.x.rows(); ++r) {
            for (auto col : {kDistSwingHigh, kDistSwingLow, kMaShort, kMaLong, kMaDiff}) {
                EXPECT_DOUBLE_EQ(f.x(r, col), k * base.x(r, col));
            }
            EXPECT_DOUBLE_EQ(f.x(r, kRsi), base.x(r, kRsi));
            EXPECT_EQ(f.x(r, kOrderBlock), base.x(r, kOrderBlock));
        }
        EXPECT_EQ(f.labels, base.labels);
    }
}

TEST(AssembleFeatures, CsvRoundTrip) {
    const auto frame = assemble_features(fixtures::random_candles(200, 6));
    const std::string text = write_feature_csv(frame);
    EXPECT_EQ(text.substr(0, text.find('\n')), "Datetime,Dist_SH,Dist_SL,OB,MA_20,MA_50,RSI,diff,Close,Label");
    const auto back = read_feature_csv(text);
    EXPECT_EQ(back.x, frame.x);
    EXPECT_EQ(back.close, frame.close);
    EXPECT_EQ(back.labels, frame.labels);
    EXPECT_EQ(back.timestamps, frame.timestamps);
    EXPECT_EQ(write_feature_csv(back), text);
}

TEST(AssembleFeatures, ConfigValidation) {
    FeatureConfig cfg;
    cfg.rsi_period = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.ob_pct = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(LabeledRows, SkipsUnlabeledRows) {
    const auto frame = assemble_features(fixtures::random_candles(200, 7));
    const auto set = labeled_rows(frame, 0, frame.rows());
    EXPECT_EQ(set.y.size(), frame.rows() - 50);
    EXPECT_EQ(set.x.rows(), static_cast<Eigen::Index>(set.y.size()));
    EXPECT_THROW(labeled_rows(frame, 0, frame.rows() + 1), std::out_of_range);
}
