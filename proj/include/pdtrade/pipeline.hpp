#pragma once

// Stage functions shared by the `run` command and the individual
// subcommands. Each stage maps file contents to file contents so that running
// the stages by hand reproduces `run` byte for byte.

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdtrade/config.hpp"

namespace pdtrade {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a local file or downloads an http(s) URL.
std::string fetch_source(const std::string& source);

/// File stem of a path or URL, used as the instrument's directory name.
std::string instrument_name(const std::string& source);

struct IngestResult {
    std::string candles_csv;  ///< canonical candle file
    std::string sha256;       ///< digest of the source bytes
    std::size_t rows = 0;
    std::vector<std::string> dropped;
};

/// Validates raw candle text. A body without data rows is an error.
IngestResult ingest_text(std::string_view body, bool lenient);

/// Featurizes the candles, or only chunk `chunk_index` of them when given.
std::string stage_features(std::string_view candles_csv, const PipelineConfig& cfg,
                           std::optional<std::size_t> chunk_index = std::nullopt);

/// Number of chunks the configured chunk size yields (1 when unchunked).
std::size_t chunk_count(std::string_view candles_csv, const PipelineConfig& cfg);

using TrainProgress = std::function<void(const TrainStats&)>;

/// Trains on the labeled rows of the training block.
std::string stage_train(std::string_view features_csv, const PipelineConfig& cfg, const TrainProgress& progress = {},
                        TrainStats* stats = nullptr);

/// Predicts every evaluation row into a results table.
std::string stage_predict(std::string_view features_csv, std::string_view tree_json, const PipelineConfig& cfg);

struct BacktestArtifacts {
    std::string metrics_json;
    std::string equity_svg;
    std::string drawdown_svg;
};

BacktestArtifacts stage_backtest(std::string_view results_csv, const PipelineConfig& cfg, std::string_view name);

struct UnitResults {
    std::string name;
    std::string results_csv;
};

struct ReportArtifacts {
    std::string aggregate_json;
    /// Absent when the evaluation grids differ and no mean curve exists.
    std::optional<std::string> equity_svg;
    std::optional<std::string> drawdown_svg;
    std::optional<std::string> warning;
};

ReportArtifacts stage_report(const std::vector<UnitResults>& units, const PipelineConfig& cfg);

enum ExitCode : int { kSuccess = 0, kConfigFailure = 1, kPartialFailure = 2 };

/// Runs every instrument (and chunk) and writes the output tree under cfg.out.
int run_pipeline(const PipelineConfig& cfg, std::ostream& log);

}  // namespace pdtrade
