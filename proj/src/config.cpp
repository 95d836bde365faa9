#include "pdtrade/config.hpp"

#include <charconv>

#include "pdtrade/csv.hpp"

namespace pdtrade {

namespace {

std::size_t to_size(std::string_view key, std::string_view v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

double to_double(std::string_view key, std::string_view v) {
    try {
        return csv::parse_double(v, 0, key);
    } catch (const ParseError&) {
        throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    }
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

}  // namespace

void PipelineConfig::validate() const {
    try {
        features().validate();
        split().validate();
        training().validate();
        simulation().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (instruments.empty()) throw ConfigError("no instruments configured");
    if (out.empty()) throw ConfigError("out must not be empty");
    if (time_limit && !(*time_limit > 0)) throw ConfigError("time_limit must be positive");
}

FeatureConfig PipelineConfig::features() const {
    FeatureConfig f;
    f.ma_short = static_cast<Eigen::Index>(ma_short);
    f.ma_long = static_cast<Eigen::Index>(ma_long);
    f.rsi_period = static_cast<Eigen::Index>(rsi_period);
    f.ob_window = static_cast<Eigen::Index>(ob_window);
    f.ob_pct = ob_pct;
    f.horizon = static_cast<Eigen::Index>(horizon);
    return f;
}

SplitSpec PipelineConfig::split() const { return {train_fraction, horizon, chunk_size}; }

TrainConfig PipelineConfig::training() const {
    TrainConfig t;
    t.max_depth = max_depth;
    t.min_node_size = min_node_size;
    t.workers = workers;
    if (time_limit) t.time_limit = std::chrono::duration<double>(*time_limit);
    return t;
}

SimulationConfig PipelineConfig::simulation() const {
    SimulationConfig s;
    s.initial_balance = initial_balance;
    s.trail = trail;
    s.fill = fill;
    return s;
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "instruments", "horizon",        "trail",      "max_depth",       "min_node_size", "rsi_period",
        "ob_window",   "ob_pct",         "ma_short",   "ma_long",         "train_fraction", "chunk_size",
        "initial_balance", "fill",       "out",        "workers",         "seed",          "lenient",
        "time_limit"};
    return keys;
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view raw) {
    const std::string_view v = csv::trim(raw);
    if (key == "instruments") {
        cfg.instruments.clear();
        if (v.empty()) return;
        for (auto item : csv::split(v)) {
            item = csv::trim(item);
            if (item.empty()) throw ConfigError("instruments: empty entry");
            cfg.instruments.emplace_back(item);
        }
    } else if (key == "horizon") {
        cfg.horizon = to_size(key, v);
    } else if (key == "trail") {
        cfg.trail = to_double(key, v);
    } else if (key == "max_depth") {
        cfg.max_depth = to_size(key, v);
    } else if (key == "min_node_size") {
        cfg.min_node_size = to_size(key, v);
    } else if (key == "rsi_period") {
        cfg.rsi_period = to_size(key, v);
    } else if (key == "ob_window") {
        cfg.ob_window = to_size(key, v);
    } else if (key == "ob_pct") {
        cfg.ob_pct = to_double(key, v);
    } else if (key == "ma_short") {
        cfg.ma_short = to_size(key, v);
    } else if (key == "ma_long") {
        cfg.ma_long = to_size(key, v);
    } else if (key == "train_fraction") {
        cfg.train_fraction = to_double(key, v);
    } else if (key == "chunk_size") {
        if (v.empty() || v == "none") {
            cfg.chunk_size.reset();
        } else {
            cfg.chunk_size = to_size(key, v);
        }
    } else if (key == "initial_balance") {
        cfg.initial_balance = to_double(key, v);
    } else if (key == "fill") {
        if (v == "close") {
            cfg.fill = FillMode::Close;
        } else if (v == "stop_level") {
            cfg.fill = FillMode::StopLevel;
        } else {
            throw ConfigError("fill: expected close or stop_level, got '" + std::string(v) + "'");
        }
    } else if (key == "out") {
        cfg.out = std::string(v);
    } else if (key == "workers") {
        cfg.workers = to_size(key, v);
    } else if (key == "seed") {
        cfg.seed = to_size(key, v);
    } else if (key == "lenient") {
        cfg.lenient = to_bool(key, v);
    } else if (key == "time_limit") {
        if (v.empty() || v == "none") {
            cfg.time_limit.reset();
        } else {
            cfg.time_limit = to_double(key, v);
        }
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
    std::size_t line_no = 0;
    for (auto line : csv::lines(text)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = csv::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_setting(base, csv::trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

std::map<std::string, std::string> config_snapshot(const PipelineConfig& cfg) {
    std::map<std::string, std::string> out;
    std::string list;
    for (const auto& i : cfg.instruments) list += (list.empty() ? "" : ",") + i;
    out["instruments"] = list;
    out["horizon"] = std::to_string(cfg.horizon);
    out["trail"] = csv::format_double(cfg.trail);
    out["max_depth"] = std::to_string(cfg.max_depth);
    out["min_node_size"] = std::to_string(cfg.min_node_size);
    out["rsi_period"] = std::to_string(cfg.rsi_period);
    out["ob_window"] = std::to_string(cfg.ob_window);
    out["ob_pct"] = csv::format_double(cfg.ob_pct);
    out["ma_short"] = std::to_string(cfg.ma_short);
    out["ma_long"] = std::to_string(cfg.ma_long);
    out["train_fraction"] = csv::format_double(cfg.train_fraction);
    out["chunk_size"] = cfg.chunk_size ? std::to_string(*cfg.chunk_size) : "none";
    out["initial_balance"] = csv::format_double(cfg.initial_balance);
    out["fill"] = cfg.fill == FillMode::Close ? "close" : "stop_level";
    out["out"] = cfg.out;
    out["workers"] = std::to_string(cfg.workers);
    out["seed"] = std::to_string(cfg.seed);
    out["lenient"] = cfg.lenient ? "true" : "false";
    out["time_limit"] = cfg.time_limit ? csv::format_double(*cfg.time_limit) : "none";
    return out;
}

std::string format_config(const PipelineConfig& cfg) {
    const auto snap = config_snapshot(cfg);
    std::string out;
    for (auto key : config_keys()) out += std::string(key) + " = " + snap.at(std::string(key)) + "\n";
    return out;
}

}  // namespace pdtrade
