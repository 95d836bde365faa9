#pragma once

// Causal technical indicators over price vectors. Every value at index t is a
// function of inputs at indices <= t only. Undefined entries (warm-up, no swing
// seen yet) are NaN.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pdtrade {

template <typename Scalar>
inline constexpr Scalar kUndefined = std::numeric_limits<Scalar>::quiet_NaN();

template <typename Scalar>
bool is_defined(Scalar v) {
    return !std::isnan(v);
}

template <typename Scalar>
struct SwingLevels {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> high;  ///< most recent confirmed swing high
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> low;   ///< most recent confirmed swing low
};

/// Index i is a swing high when highs[i] strictly exceeds both neighbours, and
/// a swing low when lows[i] strictly undercuts both. A swing is only known
/// once its right neighbour closes, so the value at t is the latest swing at
/// an index <= t-1.
template <typename DerivedH, typename DerivedL>
SwingLevels<typename DerivedH::Scalar> swing_points(const Eigen::MatrixBase<DerivedH>& highs,
                                                    const Eigen::MatrixBase<DerivedL>& lows) {
    using Scalar = typename DerivedH::Scalar;
    const Eigen::Index n = highs.size();
    if (lows.size() != n) throw std::invalid_argument("swing_points: highs and lows differ in length");
    SwingLevels<Scalar> out{Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n, kUndefined<Scalar>),
                            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n, kUndefined<Scalar>)};
    Scalar last_high = kUndefined<Scalar>;
    Scalar last_low = kUndefined<Scalar>;
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::Index i = t - 1;  // candidate confirmed by bar t
        if (i >= 1) {
            if (highs(i) > highs(i - 1) && highs(i) > highs(t)) last_high = highs(i);
            if (lows(i) < lows(i - 1) && lows(i) < lows(t)) last_low = lows(i);
        }
        out.high(t) = last_high;
        out.low(t) = last_low;
    }
    return out;
}

/// Trailing simple moving average over `window` values ending at t.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> moving_average(const Eigen::MatrixBase<Derived>& closes,
                                                                         Eigen::Index window) {
    using Scalar = typename Derived::Scalar;
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    const Eigen::Index n = closes.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n, kUndefined<Scalar>);
    for (Eigen::Index t = window - 1; t < n; ++t) {
        // Sequential sum: vectorized reductions reorder additions per target ISA.
        Scalar sum = 0;
        for (Eigen::Index k = t - window + 1; k <= t; ++k) sum += closes(k);
        out(t) = sum / static_cast<Scalar>(window);
    }
    return out;
}

/// 1 when the high-low range of the trailing `window` bars (current bar
/// included) is strictly below pct * close, else 0.
template <typename DerivedH, typename DerivedL, typename DerivedC>
Eigen::Matrix<typename DerivedC::Scalar, Eigen::Dynamic, 1> order_block(const Eigen::MatrixBase<DerivedH>& highs,
                                                                       const Eigen::MatrixBase<DerivedL>& lows,
                                                                       const Eigen::MatrixBase<DerivedC>& closes,
                                                                       Eigen::Index window = 5,
                                                                       typename DerivedC::Scalar pct = 0.002) {
    using Scalar = typename DerivedC::Scalar;
    if (window < 1) throw std::invalid_argument("order_block: window must be >= 1");
    const Eigen::Index n = closes.size();
    if (highs.size() != n || lows.size() != n) throw std::invalid_argument("order_block: series differ in length");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n, kUndefined<Scalar>);
    for (Eigen::Index t = window - 1; t < n; ++t) {
        const Scalar range = highs.segment(t - window + 1, window).maxCoeff() - lows.segment(t - window + 1, window).minCoeff();
        out(t) = range < pct * closes(t) ? Scalar(1) : Scalar(0);
    }
    return out;
}

/// Relative strength index from simple trailing means of the last `period`
/// close-to-close gains and losses. Zero losses give 100 (50 when there is
/// no movement at all).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> rsi(const Eigen::MatrixBase<Derived>& closes,
                                                              Eigen::Index period = 14) {
    using Scalar = typename Derived::Scalar;
    if (period < 1) throw std::invalid_argument("rsi: period must be >= 1");
    const Eigen::Index n = closes.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n, kUndefined<Scalar>);
    for (Eigen::Index t = period; t < n; ++t) {
        Scalar gain = 0, loss = 0;
        for (Eigen::Index k = t - period + 1; k <= t; ++k) {
            const Scalar delta = closes(k) - closes(k - 1);
            if (delta > 0) gain += delta;
            else loss -= delta;
        }
        const Scalar avg_gain = gain / static_cast<Scalar>(period);
        const Scalar avg_loss = loss / static_cast<Scalar>(period);
        if (avg_loss == 0) {
            out(t) = avg_gain > 0 ? Scalar(100) : Scalar(50);
        } else {
            const Scalar rs = avg_gain / avg_loss;
            out(t) = Scalar(100) - Scalar(100) / (Scalar(1) + rs);
        }
    }
    return out;
}

/// y_t = 1 when the close h bars ahead is strictly higher; empty for the last h.
template <typename Derived>
std::vector<std::optional<std::uint8_t>> make_labels(const Eigen::MatrixBase<Derived>& closes, Eigen::Index horizon) {
    if (horizon < 1) throw std::invalid_argument("make_labels: horizon must be >= 1");
    const Eigen::Index n = closes.size();
    std::vector<std::optional<std::uint8_t>> out(static_cast<std::size_t>(n));
    for (Eigen::Index t = 0; t + horizon < n; ++t) {
        out[static_cast<std::size_t>(t)] = closes(t + horizon) > closes(t) ? 1 : 0;
    }
    return out;
}

}  // namespace pdtrade
