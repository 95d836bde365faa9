#pragma once

#include <array>
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

struct Candle {
    Timestamp timestamp;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;

    friend bool operator==(const Candle&, const Candle&) = default;
};

/// Column order of the feature vector.
enum FeatureColumn : Eigen::Index {
    kDistSwingHigh = 0,
    kDistSwingLow,
    kOrderBlock,
    kMaShort,
    kMaLong,
    kRsi,
    kMaDiff,
    kFeatureCount
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "Dist_SH", "Dist_SL", "OB", "MA_20", "MA_50", "RSI", "diff"};

struct FeatureConfig {
    Eigen::Index ma_short = 20;
    Eigen::Index ma_long = 50;
    Eigen::Index rsi_period = 14;
    Eigen::Index ob_window = 5;
    double ob_pct = 0.002;
    Eigen::Index horizon = 50;

    void validate() const;
};

/// Time-aligned feature rows. Rows without a label (the last `horizon`
/// candles) are kept so they can still be predicted.
struct FeatureFrame {
    std::vector<Timestamp> timestamps;
    Vector<double> close;
    FeatureMatrix<double> x;
    std::vector<std::optional<Label>> labels;
    /// Index of the first candle that produced a row; rows map to consecutive candles.
    std::size_t first_candle = 0;

    std::size_t rows() const { return timestamps.size(); }
};

class InsufficientHistoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Computes every indicator, drops warm-up rows and attaches horizon labels.
FeatureFrame assemble_features(std::span<const Candle> candles, const FeatureConfig& cfg = {});

/// Labeled rows inside [begin, end), in time order.
struct TrainingSet {
    FeatureMatrix<double> x;
    std::vector<Label> y;
};
TrainingSet labeled_rows(const FeatureFrame& frame, std::size_t begin, std::size_t end);

/// Header: Datetime,Dist_SH,Dist_SL,OB,MA_20,MA_50,RSI,diff,Close,Label
std::string write_feature_csv(const FeatureFrame& frame);
FeatureFrame read_feature_csv(std::string_view text);

}  // namespace pdtrade
