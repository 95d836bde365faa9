#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace pdtrade {

enum class ChartKind { Equity, Drawdown };

/// Self-contained SVG line chart, one polyline per series. Drawdown charts
/// take drawdown percentages and plot them growing downward from 0%.
std::string emit_chart(std::span<const Eigen::VectorXd> series, std::span<const std::string> labels, ChartKind kind,
                       const std::string& title = {});

}  // namespace pdtrade
