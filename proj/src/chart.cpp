#include "pdtrade/chart.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <stdexcept>

namespace pdtrade {

namespace {

constexpr double kWidth = 800, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string emit_chart(std::span<const Eigen::VectorXd> series, std::span<const std::string> labels, ChartKind kind,
                       const std::string& title) {
    if (series.empty()) throw std::invalid_argument("emit_chart: no series");
    if (labels.size() != series.size()) throw std::invalid_argument("emit_chart: one label per series required");
    const Eigen::Index n = series.front().size();
    if (n == 0) throw std::invalid_argument("emit_chart: empty series");
    for (const auto& s : series) {
        if (s.size() != n) throw std::invalid_argument("emit_chart: series differ in length");
    }

    const bool drawdown = kind == ChartKind::Drawdown;
    double lo = series.front()(0), hi = lo;
    for (const auto& s : series) {
        lo = std::min(lo, s.minCoeff());
        hi = std::max(hi, s.maxCoeff());
    }
    if (drawdown) lo = 0;
    if (hi - lo < 1e-12) {
        hi += 1;
        if (!drawdown) lo -= 1;
    }

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto x_of = [&](Eigen::Index i) { return kLeft + (n == 1 ? 0.0 : plot_w * static_cast<double>(i) / static_cast<double>(n - 1)); };
    // Equity grows upward; drawdown grows downward from the top edge.
    auto y_of = [&](double v) {
        const double frac = (v - lo) / (hi - lo);
        return drawdown ? kTop + plot_h * frac : kTop + plot_h * (1.0 - frac);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n";
    svg += "<rect width=\"800\" height=\"400\" fill=\"#ffffff\"/>\n";
    const std::string heading = title.empty() ? (drawdown ? "Drawdown" : "Portfolio value") : title;
    svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(heading) + "</text>\n";
    svg += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", y_of(v)) + "\" x2=\"" +
               fmt("%.2f", kLeft + plot_w) + "\" y2=\"" + fmt("%.2f", y_of(v)) + "\"/>\n";
    }
    svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        const std::string label = drawdown ? fmt("%.2f%%", v) : fmt("%.2f", v);
        svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", y_of(v) + 4) + "\">" + label + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<text x=\"400\" y=\"" + fmt("%.2f", kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">bar</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt("%.2f", kTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
           fmt("%.2f", kTop + plot_h / 2) + ")\">" + (drawdown ? "drawdown (%)" : "value") + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPalette.size()];
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i) svg += ' ';
            svg += fmt("%.2f", x_of(i)) + "," + fmt("%.2f", y_of(series[s](i)));
        }
        svg += "\"/>\n";
        const double ly = kTop + 14 + 16 * static_cast<double>(s);
        svg += "<line x1=\"" + fmt("%.2f", kLeft + 10) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
               fmt("%.2f", kLeft + 30) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", kLeft + 36) + "\" y=\"" + fmt("%.2f", ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(labels[s]) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace pdtrade
