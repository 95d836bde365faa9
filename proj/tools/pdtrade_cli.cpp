// pdtrade: build, backtest and report permutation-decision-tree strategies.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "pdtrade/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pdtrade;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void dump(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

// Name a results file the way `run` names its unit: the directory relative to the output root.
std::string unit_name(const fs::path& results, const std::string& out_root) {
    const fs::path dir = fs::absolute(results).parent_path().lexically_normal();
    const fs::path rel = dir.lexically_relative(fs::absolute(out_root).lexically_normal());
    if (rel.empty() || rel.native().starts_with("..") || rel == ".") return dir.filename().string();
    return rel.generic_string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation decision tree trading pipeline"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(PDTRADE_VERSION));

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);

    // Every config key doubles as a flag; flags override the file.
    std::map<std::string, std::string> overrides;
    std::map<std::string, CLI::Option*> key_options;
    for (auto key : config_keys()) {
        if (key == "lenient") continue;
        std::string flag = "--" + std::string(key);
        for (auto& c : flag) if (c == '_') c = '-';
        key_options[std::string(key)] = app.add_option(flag, overrides[std::string(key)], "config key " + std::string(key));
    }
    bool lenient = false;
    auto* lenient_flag = app.add_flag("--lenient", lenient, "drop malformed candle rows instead of failing");

    auto* ingest = app.add_subcommand("ingest", "validate a candle file or URL and store a canonical copy");
    std::string source, ingest_out;
    ingest->add_option("source", source, "path or http(s) URL")->required();
    ingest->add_option("-o,--output", ingest_out, "destination (default <out>/<name>/candles.csv)");

    auto* features = app.add_subcommand("features", "compute the feature table");
    std::string candles_in, features_out;
    std::size_t chunk_index = 0;
    features->add_option("candles", candles_in)->required()->check(CLI::ExistingFile);
    features->add_option("-o,--output", features_out)->required();
    auto* chunk_opt = features->add_option("--chunk-index", chunk_index, "1-based chunk to featurize")
                          ->check(CLI::PositiveNumber);

    auto* train = app.add_subcommand("train", "grow the tree on the training block");
    std::string train_in, tree_out;
    train->add_option("features", train_in)->required()->check(CLI::ExistingFile);
    train->add_option("-o,--output", tree_out)->required();

    auto* predict = app.add_subcommand("predict", "predict the evaluation block");
    std::string predict_features, predict_tree, results_out;
    predict->add_option("features", predict_features)->required()->check(CLI::ExistingFile);
    predict->add_option("tree", predict_tree)->required()->check(CLI::ExistingFile);
    predict->add_option("-o,--output", results_out)->required();

    auto* backtest = app.add_subcommand("backtest", "simulate the strategy and the buy-and-hold baseline");
    std::string results_in, backtest_dir, backtest_name;
    backtest->add_option("results", results_in)->required()->check(CLI::ExistingFile);
    backtest->add_option("-d,--dir", backtest_dir, "output directory (default: next to the results)");
    backtest->add_option("--name", backtest_name, "instrument name in the metrics");

    auto* report = app.add_subcommand("report", "aggregate several results tables");
    std::vector<std::string> report_inputs;
    report->add_option("results", report_inputs)->required()->check(CLI::ExistingFile);

    app.add_subcommand("run", "ingest, train, backtest and report every configured instrument");

    CLI11_PARSE(app, argc, argv);

    PipelineConfig cfg;
    try {
        if (!config_path.empty()) cfg = parse_config(slurp(config_path));
        for (const auto& [key, opt] : key_options) {
            if (opt->count() > 0) apply_setting(cfg, key, overrides[key]);
        }
        if (lenient_flag->count() > 0) cfg.lenient = lenient;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    }

    try {
        if (app.got_subcommand("run")) return run_pipeline(cfg, std::cerr);

        if (app.got_subcommand(ingest)) {
            const auto res = ingest_text(fetch_source(source), cfg.lenient);
            for (const auto& d : res.dropped) std::cerr << "dropped " << d << '\n';
            const fs::path dest =
                ingest_out.empty() ? fs::path(cfg.out) / instrument_name(source) / "candles.csv" : fs::path(ingest_out);
            dump(dest, res.candles_csv);
            std::cout << res.sha256 << "  " << source << "  " << res.rows << " rows -> " << dest.string() << '\n';
        } else if (app.got_subcommand(features)) {
            std::optional<std::size_t> idx;
            if (chunk_opt->count() > 0) idx = chunk_index - 1;
            dump(features_out, stage_features(slurp(candles_in), cfg, idx));
        } else if (app.got_subcommand(train)) {
            TrainStats stats;
            const auto tree = stage_train(
                slurp(train_in), cfg,
                [](const TrainStats& s) {
                    if (s.nodes % 250 == 0) std::cerr << s.nodes << " nodes\n";
                },
                &stats);
            std::cerr << "trained " << stats.nodes << " nodes, " << stats.leaves << " leaves, depth "
                      << stats.max_depth_reached << (stats.time_limit_hit ? " (time limit hit)" : "") << '\n';
            dump(tree_out, tree);
        } else if (app.got_subcommand(predict)) {
            dump(results_out, stage_predict(slurp(predict_features), slurp(predict_tree), cfg));
        } else if (app.got_subcommand(backtest)) {
            const fs::path dir = backtest_dir.empty() ? fs::path(results_in).parent_path() : fs::path(backtest_dir);
            const std::string name = backtest_name.empty() ? unit_name(results_in, cfg.out) : backtest_name;
            const auto bt = stage_backtest(slurp(results_in), cfg, name);
            dump(dir / "metrics.json", bt.metrics_json);
            dump(dir / "equity.svg", bt.equity_svg);
            dump(dir / "drawdown.svg", bt.drawdown_svg);
            std::cout << bt.metrics_json;
        } else if (app.got_subcommand(report)) {
            std::vector<UnitResults> units;
            for (const auto& path : report_inputs) units.push_back({unit_name(path, cfg.out), slurp(path)});
            const auto rep = stage_report(units, cfg);
            const fs::path root(cfg.out);
            dump(root / "aggregate.json", rep.aggregate_json);
            if (rep.equity_svg) dump(root / "aggregate_equity.svg", *rep.equity_svg);
            if (rep.drawdown_svg) dump(root / "aggregate_drawdown.svg", *rep.drawdown_svg);
            if (rep.warning) std::cerr << "warning: " << *rep.warning << '\n';
            std::cout << rep.aggregate_json;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
