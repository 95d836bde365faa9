#include "pdtrade/pipeline.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pdtrade/chart.hpp"
#include "pdtrade/digest.hpp"
#include "pdtrade/report.hpp"
#include "pdtrade/tree_io.hpp"

namespace fs = std::filesystem;

namespace pdtrade {

namespace {

bool is_url(std::string_view s) { return s.starts_with("http://") || s.starts_with("https://"); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::size_t count_data_lines(std::string_view csv_text) {
    std::size_t n = 0;
    for (auto line : csv::lines(csv_text)) {
        if (!csv::trim(line).empty()) ++n;
    }
    return n == 0 ? 0 : n - 1;
}

struct Simulated {
    std::vector<SignalRow> rows;
    BacktestResult strategy;
    BacktestResult baseline;
};

Simulated simulate_results(std::string_view results_csv, const PipelineConfig& cfg) {
    Simulated s;
    s.rows = read_results_csv(results_csv);
    s.strategy = simulate(s.rows, cfg.simulation());
    std::vector<double> closes;
    closes.reserve(s.rows.size());
    for (const auto& r : s.rows) closes.push_back(r.close);
    s.baseline = buy_and_hold(closes, cfg.initial_balance);
    return s;
}

std::vector<Eigen::VectorXd> drawdowns(const std::vector<Eigen::VectorXd>& curves) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& c : curves) out.push_back(drawdown_series(c));
    return out;
}

}  // namespace

std::string fetch_source(const std::string& source) {
    if (!is_url(source)) return read_file(source);

    const auto scheme_end = source.find("://") + 3;
    const auto path_start = source.find('/', scheme_end);
    const std::string origin = source.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : source.substr(path_start);

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    auto res = client.Get(path);
    if (!res) throw IngestError("fetching " + source + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw IngestError("fetching " + source + " returned HTTP " + std::to_string(res->status));
    return res->body;
}

std::string instrument_name(const std::string& source) {
    std::string s = source.substr(0, source.find_first_of("?#"));
    while (!s.empty() && s.back() == '/') s.pop_back();
    if (auto slash = s.find_last_of("/\\"); slash != std::string::npos) s = s.substr(slash + 1);
    if (auto dot = s.rfind('.'); dot != std::string::npos && dot > 0) s = s.substr(0, dot);
    return s.empty() ? "instrument" : s;
}

IngestResult ingest_text(std::string_view body, bool lenient) {
    IngestResult out;
    auto candles = parse_candles(body, CandleParseOptions{lenient}, &out.dropped);
    if (candles.empty()) throw IngestError("empty dataset: no candle rows after the header");
    out.rows = candles.size();
    out.candles_csv = write_candles(candles);
    out.sha256 = sha256_hex(body);
    return out;
}

std::size_t chunk_count(std::string_view candles_csv, const PipelineConfig& cfg) {
    if (!cfg.chunk_size) return 1;
    return chunk(count_data_lines(candles_csv), *cfg.chunk_size).size();
}

std::string stage_features(std::string_view candles_csv, const PipelineConfig& cfg,
                           std::optional<std::size_t> chunk_index) {
    const auto candles = parse_candles(candles_csv);
    std::span<const Candle> window(candles);
    if (chunk_index) {
        if (!cfg.chunk_size) throw ConfigError("a chunk index needs chunk_size to be set");
        const auto chunks = chunk(candles.size(), *cfg.chunk_size);
        if (*chunk_index >= chunks.size()) {
            throw std::out_of_range("chunk index " + std::to_string(*chunk_index) + " out of range; " +
                                    std::to_string(chunks.size()) + " chunks available");
        }
        window = window.subspan(chunks[*chunk_index].begin, chunks[*chunk_index].size());
    }
    return write_feature_csv(assemble_features(window, cfg.features()));
}

std::string stage_train(std::string_view features_csv, const PipelineConfig& cfg, const TrainProgress& progress,
                        TrainStats* stats) {
    const FeatureFrame frame = read_feature_csv(features_csv);
    const SplitPlan plan = plan_split(frame.rows(), cfg.split());
    const TrainingSet train = labeled_rows(frame, plan.train.begin, plan.train.end);
    TrainConfig tc = cfg.training();
    tc.progress = progress;
    const auto tree = build_pdt(train.x, train.y, 0, tc, stats);
    if (!tree) throw std::runtime_error("training block has no labeled rows");
    return serialize_tree(*tree);
}

std::string stage_predict(std::string_view features_csv, std::string_view tree_json, const PipelineConfig& cfg) {
    const FeatureFrame frame = read_feature_csv(features_csv);
    const SplitPlan plan = plan_split(frame.rows(), cfg.split());
    const Tree<double> tree = deserialize_tree(tree_json);
    for (const auto& node : tree.nodes()) {
        if (node.feature >= frame.x.cols()) throw TreeFormatError("tree uses a feature the table does not have");
    }
    std::vector<SignalRow> rows;
    rows.reserve(plan.evaluation.size());
    for (std::size_t r = plan.evaluation.begin; r < plan.evaluation.end; ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        rows.push_back({frame.timestamps[r], frame.labels[r], tree.predict(frame.x.row(i)), frame.close(i)});
    }
    return write_results_csv(rows);
}

BacktestArtifacts stage_backtest(std::string_view results_csv, const PipelineConfig& cfg, std::string_view name) {
    const Simulated s = simulate_results(results_csv, cfg);
    const std::vector<Eigen::VectorXd> curves = {s.strategy.portfolio, s.baseline.portfolio};
    const std::vector<std::string> labels = {"PDT strategy", "buy and hold"};
    const std::string prefix = name.empty() ? std::string() : std::string(name) + ": ";
    BacktestArtifacts out;
    out.metrics_json = emit_metrics(s.strategy, s.baseline, name);
    out.equity_svg = emit_chart(curves, labels, ChartKind::Equity, prefix + "portfolio value");
    out.drawdown_svg = emit_chart(drawdowns(curves), labels, ChartKind::Drawdown, prefix + "drawdown");
    return out;
}

ReportArtifacts stage_report(const std::vector<UnitResults>& units, const PipelineConfig& cfg) {
    if (units.empty()) throw std::invalid_argument("report: no results to aggregate");
    std::vector<InstrumentSeries> strategy, baseline;
    for (const auto& u : units) {
        Simulated s = simulate_results(u.results_csv, cfg);
        std::vector<Timestamp> ts;
        for (const auto& r : s.rows) ts.push_back(r.timestamp);
        strategy.push_back({u.name, ts, std::move(s.strategy)});
        baseline.push_back({u.name, std::move(ts), std::move(s.baseline)});
    }

    ReportArtifacts out;
    try {
        const AggregateMetrics agg_s = aggregate(strategy);
        const AggregateMetrics agg_b = aggregate(baseline);
        out.aggregate_json = emit_aggregate(agg_s, agg_b);
        const std::vector<Eigen::VectorXd> curves = {agg_s.mean_portfolio, agg_b.mean_portfolio};
        const std::vector<std::string> labels = {"PDT strategy (mean)", "buy and hold (mean)"};
        out.equity_svg = emit_chart(curves, labels, ChartKind::Equity, "mean portfolio value");
        out.drawdown_svg = emit_chart(drawdowns(curves), labels, ChartKind::Drawdown, "mean portfolio drawdown");
    } catch (const AlignmentError& e) {
        // Different grids (typically chunks or mixed markets): only the mean growth is meaningful.
        const double ms = mean_growth(strategy), mb = mean_growth(baseline);
        out.warning = std::string("no mean portfolio curve: ") + e.what();
        out.aggregate_json = "{\n  \"instruments\": " + std::to_string(units.size()) + ",\n" +
                             "  \"strategy\": {\n    \"mean_growth_pct\": " + format_pct(ms) + "\n  },\n" +
                             "  \"baseline\": {\n    \"mean_growth_pct\": " + format_pct(mb) + "\n  },\n" +
                             "  \"difference_pct\": " + format_pct(ms - mb) + ",\n" +
                             "  \"warning\": " + quote(*out.warning) + "\n}\n";
    }
    return out;
}

namespace {

struct UnitOutcome {
    std::string name;
    fs::path dir;
    std::size_t rows = 0;
    SplitPlan plan;
    std::string results_csv;
};

struct InstrumentOutcome {
    std::string source;
    std::string name;
    std::optional<IngestResult> ingest;
    std::vector<UnitOutcome> units;
    std::optional<std::string> error;
};

class Logger {
public:
    explicit Logger(std::ostream& os) : os_(os) {}
    void operator()(const std::string& line) {
        std::lock_guard lock(mu_);
        os_ << line << '\n' << std::flush;
    }

private:
    std::ostream& os_;
    std::mutex mu_;
};

void process_instrument(InstrumentOutcome& inst, const PipelineConfig& cfg, const fs::path& out_root, Logger& log) {
    inst.ingest = ingest_text(fetch_source(inst.source), cfg.lenient);
    for (const auto& d : inst.ingest->dropped) log(inst.name + ": dropped " + d);
    const fs::path inst_dir = out_root / inst.name;
    write_file(inst_dir / "candles.csv", inst.ingest->candles_csv);

    const std::size_t n_units = chunk_count(inst.ingest->candles_csv, cfg);
    if (n_units == 0) throw std::runtime_error("fewer candles than one chunk");
    for (std::size_t k = 0; k < n_units; ++k) {
        UnitOutcome u;
        std::optional<std::size_t> chunk_index;
        if (cfg.chunk_size) {
            chunk_index = k;
            char sub[32];
            std::snprintf(sub, sizeof sub, "chunk_%02zu", k + 1);
            u.name = inst.name + "/" + sub;
            u.dir = inst_dir / sub;
        } else {
            u.name = inst.name;
            u.dir = inst_dir;
        }

        const std::string features = stage_features(inst.ingest->candles_csv, cfg, chunk_index);
        write_file(u.dir / "features.csv", features);
        u.rows = count_data_lines(features);
        u.plan = plan_split(u.rows, cfg.split());

        TrainStats stats;
        const std::string tree = stage_train(
            features, cfg,
            [&](const TrainStats& s) {
                if (s.nodes % 250 == 0) log(u.name + ": " + std::to_string(s.nodes) + " nodes");
            },
            &stats);
        log(u.name + ": trained " + std::to_string(stats.nodes) + " nodes, " + std::to_string(stats.leaves) +
            " leaves" + (stats.time_limit_hit ? " (time limit hit)" : ""));
        write_file(u.dir / "tree.json", tree);

        u.results_csv = stage_predict(features, tree, cfg);
        write_file(u.dir / "results.csv", u.results_csv);

        const BacktestArtifacts bt = stage_backtest(u.results_csv, cfg, u.name);
        write_file(u.dir / "metrics.json", bt.metrics_json);
        write_file(u.dir / "equity.svg", bt.equity_svg);
        write_file(u.dir / "drawdown.svg", bt.drawdown_svg);
        inst.units.push_back(std::move(u));
    }
}

nlohmann::ordered_json range_json(const IndexRange& r) { return {r.begin, r.end}; }

std::string build_manifest(const PipelineConfig& cfg, const std::vector<InstrumentOutcome>& instruments) {
    nlohmann::ordered_json m;
    m["tool"] = "pdtrade";
    m["version"] = PDTRADE_VERSION;
    const auto snap = config_snapshot(cfg);
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (auto key : config_keys()) config[std::string(key)] = snap.at(std::string(key));
    m["config"] = config;
    m["inputs"] = nlohmann::ordered_json::array();
    m["units"] = nlohmann::ordered_json::array();
    m["failures"] = nlohmann::ordered_json::array();
    for (const auto& inst : instruments) {
        if (inst.ingest) {
            m["inputs"].push_back({{"name", inst.name},
                                   {"source", inst.source},
                                   {"sha256", inst.ingest->sha256},
                                   {"rows", inst.ingest->rows},
                                   {"dropped_rows", inst.ingest->dropped.size()}});
        }
        for (const auto& u : inst.units) {
            m["units"].push_back({{"name", u.name},
                                  {"feature_rows", u.rows},
                                  {"train", range_json(u.plan.train)},
                                  {"test", range_json(u.plan.test)},
                                  {"evaluation", range_json(u.plan.evaluation)}});
        }
        if (inst.error) m["failures"].push_back({{"name", inst.name}, {"error", *inst.error}});
    }
    return m.dump(2) + "\n";
}

}  // namespace

int run_pipeline(const PipelineConfig& cfg, std::ostream& log_stream) {
    Logger log(log_stream);
    std::vector<InstrumentOutcome> instruments;
    try {
        cfg.validate();
        std::set<std::string> seen;
        for (const auto& src : cfg.instruments) {
            InstrumentOutcome inst;
            inst.source = src;
            inst.name = instrument_name(src);
            if (!seen.insert(inst.name).second) throw ConfigError("two instruments share the name '" + inst.name + "'");
            instruments.push_back(std::move(inst));
        }
    } catch (const ConfigError& e) {
        log(std::string("config error: ") + e.what());
        return kConfigFailure;
    }

    const fs::path out_root(cfg.out);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < instruments.size(); i = next++) {
            auto& inst = instruments[i];
            try {
                process_instrument(inst, cfg, out_root, log);
            } catch (const std::exception& e) {
                inst.error = e.what();
                inst.units.clear();
                log(inst.name + ": failed: " + e.what());
            }
        }
    };
    const std::size_t n_threads = std::min(cfg.workers, instruments.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<UnitResults> units;
    std::size_t failures = 0;
    for (const auto& inst : instruments) {
        if (inst.error) ++failures;
        for (const auto& u : inst.units) units.push_back({u.name, u.results_csv});
    }

    if (!units.empty()) {
        try {
            const ReportArtifacts rep = stage_report(units, cfg);
            write_file(out_root / "aggregate.json", rep.aggregate_json);
            if (rep.equity_svg) write_file(out_root / "aggregate_equity.svg", *rep.equity_svg);
            if (rep.drawdown_svg) write_file(out_root / "aggregate_drawdown.svg", *rep.drawdown_svg);
            if (rep.warning) log("report: " + *rep.warning);
        } catch (const std::exception& e) {
            log(std::string("report failed: ") + e.what());
            ++failures;
        }
    }
    write_file(out_root / "manifest.json", build_manifest(cfg, instruments));
    return failures == 0 ? kSuccess : kPartialFailure;
}

}  // namespace pdtrade
