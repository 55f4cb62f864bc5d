#include "blockband/pipeline/pipeline.hpp"

#include "blockband/error.hpp"
#include "blockband/parallel.hpp"
#include "blockband/pipeline/output.hpp"
#include "blockband/rng.hpp"
#include "blockband/series/csv.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace blockband::pipeline {

namespace fs = std::filesystem;

namespace {

template <typename Fn>
auto in_stage(const std::string& stage, std::optional<std::size_t> replicate, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        std::string where = "stage '" + stage + "'";
        if (replicate) {
            where += " replicate " + std::to_string(*replicate);
        }
        throw Error(e.code(), where + ": " + e.detail());
    }
}

class StageClock {
public:
    explicit StageClock(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}
    void lap(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        sink_.emplace_back(name, std::chrono::duration<double, std::milli>(now - last_).count());
        last_ = now;
    }

private:
    std::vector<std::pair<std::string, double>>& sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

nlohmann::json matrix_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

std::optional<Matrix> read_cached(const fs::path& path, const std::string& key) {
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("key").get<std::string>() != key) {
            return std::nullopt;
        }
        const auto& m = j.at("predictions");
        const auto data = m.at("data").get<std::vector<double>>();
        const auto rows = m.at("rows").get<Index>();
        const auto cols = m.at("cols").get<Index>();
        if (static_cast<Index>(data.size()) != rows * cols) {
            return std::nullopt;
        }
        return Matrix(Eigen::Map<const Matrix>(data.data(), rows, cols));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

}  // namespace

PreparedData prepare(const series::MultiSeries& raw, const PipelineConfig& config) {
    PreparedData d;
    d.raw = raw;
    d.sizes = series::split_sizes(raw.length(), config.split);
    const Index minimum = config.lookback + config.horizon + 1;
    if (d.sizes.train - 1 <= minimum || d.sizes.validation < 1 || d.sizes.test < 1) {
        throw Error(ErrorCode::SeriesTooShort,
                    "partitions of " + std::to_string(raw.length()) + " rows are too small for look-back " +
                        std::to_string(config.lookback) + " and horizon " + std::to_string(config.horizon));
    }
    d.ratios = series::log_ratio(raw);
    d.train_ratios = d.sizes.train - 1;
    d.validation_first = d.sizes.train - 1;
    d.validation_count = d.sizes.validation;
    d.test_first = d.sizes.train + d.sizes.validation - 1;
    d.test_count = d.sizes.test;
    d.scale = series::fit_minmax(d.ratios.values.topRows(d.train_ratios));
    d.scaled = series::apply_minmax(d.ratios.values, d.scale);
    return d;
}

blocklen::BlockLenConfig blocklen_config(const PipelineConfig& c) {
    blocklen::BlockLenConfig b;
    b.lookback = c.lookback;
    b.stride = c.stride;
    b.alpha = c.alpha;
    b.l_min = c.l_min;
    b.l_max = c.l_max;
    b.replicates = c.blocklen_replicates;
    b.variant = c.scheme;
    b.lbb_locality = c.lbb_locality;
    b.seed = c.seed;
    b.workers = static_cast<std::size_t>(c.workers);
    return b;
}

bootstrap::BlockScheme resolve_scheme(const PipelineConfig& config, Index l, Index rows) {
    bootstrap::BlockScheme scheme;
    scheme.variant = config.scheme;
    scheme.block_length = l;
    if (config.scheme == bootstrap::Variant::MBB && config.mbb_blocks > 0) {
        scheme.mbb_block_count = config.mbb_blocks;
    }
    if (config.scheme == bootstrap::Variant::LBB) {
        scheme.lbb_locality = bootstrap::snap_locality(rows, config.lbb_locality);
    }
    bootstrap::check_block_length(rows, l);
    return scheme;
}

Matrix predict_test(const forecaster::Forecaster& model, const PreparedData& data, Index lookback, Index horizon) {
    const Index features = data.raw.num_features();
    Matrix out(data.test_count, features);
    for (Index s = 0; s < data.test_count; ++s) {
        const Index target = data.test_first + s;
        const Index origin = target - horizon + 1;  // first predicted ratio; its source row is the anchor
        const Matrix steps = forecaster::roll_forward(model, data.scaled.topRows(origin), lookback, horizon);
        const Matrix ratios = series::invert_minmax(steps, data.scale);
        const RowVector total = ratios.colwise().sum();
        for (Index j = 0; j < features; ++j) {
            out(s, j) = data.raw.values()(origin, j) * std::exp(total[j]);
        }
    }
    return out;
}

std::string series_digest(const series::MultiSeries& raw) {
    std::ostringstream text;
    series::write_series_csv(text, raw);
    return sha256_hex(text.str());
}

PipelineRun run_pipeline(const series::MultiSeries& raw, const PipelineConfig& config,
                         const std::optional<fs::path>& cache_dir) {
    validate(config);
    PipelineRun run;
    run.config = config;
    StageClock clock(run.timings_ms);

    run.data = in_stage("transform", std::nullopt, [&] { return prepare(raw, config); });
    run.data_digest = series_digest(raw);
    const PreparedData& data = run.data;
    const Matrix train_rows = data.train_ratio_rows();
    clock.lap("transform");

    if (config.block_length) {
        run.block_length = *config.block_length;
    } else {
        run.curve = in_stage("select-block-length", std::nullopt,
                             [&] { return blocklen::select_block_length(train_rows, blocklen_config(config)); });
        run.block_length = run.curve->best_l;
    }
    run.scheme = in_stage("bootstrap", std::nullopt,
                          [&] { return resolve_scheme(config, run.block_length, train_rows.rows()); });
    clock.lap("select-block-length");

    const forecaster::SupervisedWindows validation = in_stage("transform", std::nullopt, [&] {
        return forecaster::make_supervised(data.scaled, config.lookback, data.validation_first, data.validation_count);
    });

    run.train_config = config.train;
    if (config.forecaster == ForecasterKind::Lstm && config.tune_budget > 0) {
        run.tuning = in_stage("tune", std::nullopt, [&] {
            const auto train = forecaster::make_supervised(data.scaled.topRows(data.train_ratios), config.lookback);
            return forecaster::tune(train, validation, forecaster::SearchSpace{}, config.tune_budget, config.train,
                                    derive_seed(config.seed, 2, 0));
        });
        run.train_config = run.tuning->best;
    }
    clock.lap("tune");

    nlohmann::json key_base;
    key_base["version"] = 1;
    key_base["data"] = run.data_digest;
    key_base["split"] = {config.split.train, config.split.validation, config.split.test};
    key_base["lookback"] = config.lookback;
    key_base["horizon"] = config.horizon;
    key_base["scheme"] = {{"variant", std::string(bootstrap::variant_name(run.scheme.variant))},
                          {"l", run.scheme.block_length},
                          {"mbb_blocks", run.scheme.mbb_block_count.value_or(0)},
                          {"lbb_locality", run.scheme.lbb_locality}};
    if (config.forecaster == ForecasterKind::Lstm) {
        nlohmann::json tc = forecaster::train_config_to_json(run.train_config);
        tc.erase("seed");
        key_base["forecaster"] = {{"kind", "lstm"}, {"train", tc}};
    } else {
        key_base["forecaster"] = {{"kind", "baseline"}, {"ridge", config.ridge}};
    }

    const auto reps = static_cast<std::size_t>(config.replicates);
    run.replicates.resize(reps);
    if (cache_dir) {
        fs::create_directories(*cache_dir);
    }
    parallel_for(reps, static_cast<std::size_t>(config.workers), [&](std::size_t r) {
        ReplicateOutcome& outcome = run.replicates[r];
        outcome.bootstrap_seed = bootstrap_seed(config.seed, r);
        outcome.forecaster_seed = forecaster_seed(config.seed, r);
        nlohmann::json key = key_base;
        key["bootstrap_seed"] = outcome.bootstrap_seed;
        key["forecaster_seed"] = outcome.forecaster_seed;
        outcome.cache_key = sha256_hex(key.dump());

        const std::optional<fs::path> cache_file =
            cache_dir ? std::optional<fs::path>(*cache_dir / (outcome.cache_key + ".json")) : std::nullopt;
        if (cache_file && !config.save_models) {
            if (auto cached = read_cached(*cache_file, outcome.cache_key)) {
                outcome.predictions = std::move(*cached);
                outcome.from_cache = true;
                return;
            }
        }

        const auto sample = in_stage("bootstrap", r, [&] {
            return bootstrap::resample(train_rows, run.scheme, outcome.bootstrap_seed);
        });
        const Matrix sample_scaled = series::apply_minmax(sample.values, data.scale);
        const auto train = in_stage("fit", r, [&] { return forecaster::make_supervised(sample_scaled, config.lookback); });

        std::unique_ptr<forecaster::Forecaster> model = in_stage("fit", r, [&]() -> std::unique_ptr<forecaster::Forecaster> {
            if (config.forecaster == ForecasterKind::Lstm) {
                forecaster::TrainConfig tc = run.train_config;
                tc.seed = outcome.forecaster_seed;
                auto fitted = forecaster::fit(train, validation, tc, outcome.forecaster_seed);
                outcome.history = std::move(fitted.history);
                return std::make_unique<forecaster::LstmForecaster>(std::move(fitted.params), tc);
            }
            return std::make_unique<forecaster::RidgeForecaster>(forecaster::baseline_ar_fit(train, config.ridge));
        });
        outcome.predictions =
            in_stage("predict", r, [&] { return predict_test(*model, data, config.lookback, config.horizon); });
        if (!outcome.predictions.allFinite()) {
            throw Error(ErrorCode::DivergedLoss,
                        "stage 'predict' replicate " + std::to_string(r) + ": non-finite test predictions");
        }
        if (config.save_models) {
            outcome.checkpoint = forecaster::save_checkpoint(*model, data.scale);
        }
        if (cache_file) {
            nlohmann::json payload{{"key", outcome.cache_key}, {"predictions", matrix_json(outcome.predictions)}};
            write_file_atomic(*cache_file, payload.dump());
        }
    });
    clock.lap("replicates");

    run.band = in_stage("band", std::nullopt, [&] {
        band::EnsemblePredictions ensemble;
        for (const auto& outcome : run.replicates) {
            ensemble.members.push_back(outcome.predictions);
            ensemble.seeds.push_back(outcome.bootstrap_seed);
        }
        band::ConfidenceBand b = band::percentile_band(ensemble, config.level, data.test_actuals());
        b.feature_names = data.raw.feature_names();
        const auto& ts = data.raw.timestamps();
        b.timestamps.assign(ts.end() - data.test_count, ts.end());
        return b;
    });
    run.metrics = band::compute_metrics(run.band);
    clock.lap("band");
    return run;
}

}  // namespace blockband::pipeline
