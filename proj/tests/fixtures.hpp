#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pdtrade/features.hpp"

namespace fixtures {

// Random-walk 5-minute candles starting 2024-01-01 00:00.
inline std::vector<pdtrade::Candle> random_candles(std::size_t n, unsigned seed, double start = 100.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 0.002);
    std::uniform_real_distribution<double> wick(0.0, 0.001);
    std::vector<pdtrade::Candle> out;
    double price = start;
    for (std::size_t i = 0; i < n; ++i) {
        const double open = price;
        const double close = std::round(open * (1.0 + step(rng)) * 100.0) / 100.0;
        const double high = std::round(std::max(open, close) * (1.0 + wick(rng)) * 100.0) / 100.0 + 0.01;
        const double low = std::round(std::min(open, close) * (1.0 - wick(rng)) * 100.0) / 100.0 - 0.01;
        const auto minutes = static_cast<int>(i * 5);
        out.push_back({pdtrade::make_timestamp(2024, 1, 1 + minutes / 1440, (minutes / 60) % 24, minutes % 60),
                       open, high, low, close});
        price = close;
    }
    return out;
}

}  // namespace fixtures
