#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdtrade/backtest.hpp"
#include "pdtrade/dataset.hpp"
#include "pdtrade/features.hpp"
#include "pdtrade/pdt.hpp"

namespace pdtrade {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PipelineConfig {
    std::vector<std::string> instruments;  ///< local paths or http(s) URLs
    std::size_t horizon = 50;
    double trail = 0.005;
    std::size_t max_depth = 10;
    std::size_t min_node_size = 5;
    std::size_t rsi_period = 14;
    std::size_t ob_window = 5;
    double ob_pct = 0.002;
    std::size_t ma_short = 20;
    std::size_t ma_long = 50;
    double train_fraction = 0.8;
    std::optional<std::size_t> chunk_size;
    double initial_balance = 10000.0;
    FillMode fill = FillMode::Close;
    std::string out = "out";
    std::size_t workers = 1;
    std::uint64_t seed = 0;  // reserved, nothing is random
    bool lenient = false;
    std::optional<double> time_limit;  // seconds per tree

    void validate() const;

    FeatureConfig features() const;
    SplitSpec split() const;
    TrainConfig training() const;
    SimulationConfig simulation() const;
};

/// Every recognised key, in snapshot order.
const std::vector<std::string_view>& config_keys();

/// Sets one key from its textual value. Unknown keys and bad values throw.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` lines; `#` starts a comment.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});

/// Textual value of every key, as accepted by apply_setting.
std::map<std::string, std::string> config_snapshot(const PipelineConfig& cfg);
std::string format_config(const PipelineConfig& cfg);

}  // namespace pdtrade
