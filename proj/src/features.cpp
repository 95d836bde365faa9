#include "pdtrade/features.hpp"

#include "pdtrade/csv.hpp"
#include "pdtrade/indicators.hpp"

namespace pdtrade {

namespace {

constexpr std::string_view kFeatureHeader = "Datetime,Dist_SH,Dist_SL,OB,MA_20,MA_50,RSI,diff,Close,Label";

}  // namespace

void FeatureConfig::validate() const {
    if (ma_short < 1 || ma_long < 1) throw std::invalid_argument("moving-average windows must be >= 1");
    if (rsi_period < 1) throw std::invalid_argument("rsi_period must be >= 1");
    if (ob_window < 1) throw std::invalid_argument("ob_window must be >= 1");
    if (!(ob_pct > 0)) throw std::invalid_argument("ob_pct must be positive");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
}

FeatureFrame assemble_features(std::span<const Candle> candles, const FeatureConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(candles.size());
    Vector<double> open(n), high(n), low(n), close(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Candle& c = candles[static_cast<std::size_t>(i)];
        open(i) = c.open;
        high(i) = c.high;
        low(i) = c.low;
        close(i) = c.close;
    }

    const SwingLevels<double> swings = swing_points(high, low);
    const Vector<double> ma_short = moving_average(close, cfg.ma_short);
    const Vector<double> ma_long = moving_average(close, cfg.ma_long);
    const Vector<double> strength = rsi(close, cfg.rsi_period);
    const Vector<double> block = order_block(high, low, close, cfg.ob_window, cfg.ob_pct);
    const auto labels = make_labels(close, cfg.horizon);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (is_defined(swings.high(t)) && is_defined(swings.low(t)) && is_defined(ma_short(t)) &&
            is_defined(ma_long(t)) && is_defined(strength(t)) && is_defined(block(t))) {
            keep.push_back(t);
        }
    }
    if (keep.empty()) {
        throw InsufficientHistoryError("no candle has every indicator defined (" + std::to_string(n) +
                                       " candles supplied)");
    }

    FeatureFrame frame;
    const auto rows = static_cast<Eigen::Index>(keep.size());
    frame.first_candle = static_cast<std::size_t>(keep.front());
    frame.close.resize(rows);
    frame.x.resize(rows, kFeatureCount);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = keep[static_cast<std::size_t>(r)];
        frame.timestamps.push_back(candles[static_cast<std::size_t>(t)].timestamp);
        frame.close(r) = close(t);
        frame.x(r, kDistSwingHigh) = close(t) - swings.high(t);
        frame.x(r, kDistSwingLow) = close(t) - swings.low(t);
        frame.x(r, kOrderBlock) = block(t);
        frame.x(r, kMaShort) = ma_short(t);
        frame.x(r, kMaLong) = ma_long(t);
        frame.x(r, kRsi) = strength(t);
        frame.x(r, kMaDiff) = ma_short(t) - ma_long(t);
        frame.labels.push_back(labels[static_cast<std::size_t>(t)]);
    }
    return frame;
}

TrainingSet labeled_rows(const FeatureFrame& frame, std::size_t begin, std::size_t end) {
    if (begin > end || end > frame.rows()) throw std::out_of_range("labeled_rows: range outside the frame");
    std::vector<Eigen::Index> picked;
    for (std::size_t r = begin; r < end; ++r) {
        if (frame.labels[r]) picked.push_back(static_cast<Eigen::Index>(r));
    }
    TrainingSet set;
    set.x.resize(static_cast<Eigen::Index>(picked.size()), frame.x.cols());
    for (std::size_t i = 0; i < picked.size(); ++i) {
        set.x.row(static_cast<Eigen::Index>(i)) = frame.x.row(picked[i]);
        set.y.push_back(*frame.labels[static_cast<std::size_t>(picked[i])]);
    }
    return set;
}

std::string write_feature_csv(const FeatureFrame& frame) {
    std::string out(kFeatureHeader);
    out += '\n';
    for (std::size_t r = 0; r < frame.rows(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        out += format_timestamp(frame.timestamps[r]);
        for (Eigen::Index c = 0; c < kFeatureCount; ++c) {
            out += ',';
            out += csv::format_double(frame.x(row, c));
        }
        out += ',';
        out += csv::format_double(frame.close(row));
        out += ',';
        if (frame.labels[r]) out += static_cast<char>('0' + *frame.labels[r]);
        out += '\n';
    }
    return out;
}

FeatureFrame read_feature_csv(std::string_view text) {
    const auto lines = csv::lines(text);
    if (lines.empty() || csv::trim(lines.front()) != kFeatureHeader) {
        throw ParseError(1, "expected header '" + std::string(kFeatureHeader) + "'");
    }
    std::vector<std::vector<double>> rows;
    FeatureFrame frame;
    std::vector<double> closes;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (csv::trim(lines[i]).empty()) continue;
        const auto fields = csv::split(lines[i]);
        if (fields.size() != 10) {
            throw ParseError(line_no, "expected 10 fields, found " + std::to_string(fields.size()));
        }
        try {
            frame.timestamps.push_back(parse_timestamp(fields[0]));
        } catch (const TimestampError& e) {
            throw ParseError(line_no, e.what());
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            row.push_back(csv::parse_double(fields[c + 1], line_no, kFeatureNames[c]));
        }
        rows.push_back(std::move(row));
        closes.push_back(csv::parse_double(fields[8], line_no, "Close"));
        if (fields[9].empty()) {
            frame.labels.emplace_back();
        } else if (fields[9] == "0" || fields[9] == "1") {
            frame.labels.emplace_back(static_cast<Label>(fields[9][0] - '0'));
        } else {
            throw ParseError(line_no, "Label must be 0, 1 or empty");
        }
    }
    frame.x = rows.empty() ? FeatureMatrix<double>(0, kFeatureCount) : to_matrix(rows);
    frame.close = Eigen::Map<const Vector<double>>(closes.data(), static_cast<Eigen::Index>(closes.size()));
    return frame;
}

}  // namespace pdtrade
