#include "pdtrade/report.hpp"

#include <cmath>
#include <cstdio>

namespace pdtrade {

namespace {

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void append_block(std::string& out, std::string_view key, const BacktestResult& r) {
    out += "  " + quote(key) + ": {\n";
    out += "    \"growth_pct\": " + format_pct(r.growth_pct) + ",\n";
    out += "    \"max_drawdown_pct\": " + format_pct(r.max_drawdown_pct) + ",\n";
    out += "    \"trading_accuracy_pct\": " + format_pct(r.trading_accuracy_pct) + ",\n";
    out += "    \"trade_count\": " + std::to_string(r.trade_count) + ",\n";
    out += "    \"successful_trades\": " + std::to_string(r.successful_trades) + ",\n";
    out += std::string("    \"no_trades\": ") + (r.no_trades ? "true" : "false") + ",\n";
    out += "    \"final_balance\": " + format_pct(r.final_balance);
    if (r.warning) out += ",\n    \"warning\": " + quote(*r.warning);
    out += "\n  }";
}

}  // namespace

std::string format_pct(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    std::string s(buf);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

std::string emit_metrics(const BacktestResult& strategy, const BacktestResult& baseline, std::string_view instrument) {
    std::string out = "{\n";
    out += "  \"instrument\": " + quote(instrument) + ",\n";
    out += "  \"rows\": " + std::to_string(strategy.portfolio.size()) + ",\n";
    append_block(out, "strategy", strategy);
    out += ",\n";
    append_block(out, "baseline", baseline);
    out += ",\n";
    out += "  \"difference_pct\": " + format_pct(strategy.growth_pct - baseline.growth_pct) + "\n";
    out += "}\n";
    return out;
}

double mean_growth(std::span<const InstrumentSeries> runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: no instruments");
    double sum = 0;
    for (const auto& run : runs) sum += run.result.growth_pct;
    return sum / static_cast<double>(runs.size());
}

AggregateMetrics aggregate(std::span<const InstrumentSeries> runs) {
    AggregateMetrics agg;
    agg.mean_growth_pct = mean_growth(runs);
    agg.instruments = runs.size();
    agg.timestamps = runs.front().timestamps;

    std::vector<std::string> offenders;
    for (const auto& run : runs) {
        if (run.timestamps != agg.timestamps ||
            run.result.portfolio.size() != static_cast<Eigen::Index>(agg.timestamps.size())) {
            offenders.push_back(run.name);
        }
    }
    if (!offenders.empty()) {
        std::string names;
        for (const auto& o : offenders) names += (names.empty() ? "" : ", ") + o;
        throw AlignmentError("evaluation timestamps differ from '" + runs.front().name + "' for: " + names,
                             std::move(offenders));
    }

    agg.mean_portfolio = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(agg.timestamps.size()));
    for (const auto& run : runs) agg.mean_portfolio += run.result.portfolio;
    agg.mean_portfolio /= static_cast<double>(runs.size());
    agg.max_drawdown_pct = agg.mean_portfolio.size() > 0 ? max_drawdown(agg.mean_portfolio) : 0.0;
    return agg;
}

std::string emit_aggregate(const AggregateMetrics& strategy, const AggregateMetrics& baseline) {
    std::string out = "{\n";
    out += "  \"instruments\": " + std::to_string(strategy.instruments) + ",\n";
    out += "  \"rows\": " + std::to_string(strategy.mean_portfolio.size()) + ",\n";
    out += "  \"strategy\": {\n";
    out += "    \"mean_growth_pct\": " + format_pct(strategy.mean_growth_pct) + ",\n";
    out += "    \"max_drawdown_pct\": " + format_pct(strategy.max_drawdown_pct) + "\n  },\n";
    out += "  \"baseline\": {\n";
    out += "    \"mean_growth_pct\": " + format_pct(baseline.mean_growth_pct) + ",\n";
    out += "    \"max_drawdown_pct\": " + format_pct(baseline.max_drawdown_pct) + "\n  },\n";
    out += "  \"difference_pct\": " + format_pct(strategy.mean_growth_pct - baseline.mean_growth_pct) + "\n";
    out += "}\n";
    return out;
}

}  // namespace pdtrade
