#pragma once

#include "blockband/band/band.hpp"
#include "blockband/blocklen/objective.hpp"
#include "blockband/bootstrap/block_bootstrap.hpp"
#include "blockband/forecaster/forecaster.hpp"
#include "blockband/pipeline/config.hpp"
#include "blockband/series/multi_series.hpp"
#include "blockband/series/transforms.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace blockband::pipeline {

/**
 * @brief The input series in every form the run needs.
 *
 * Log-ratio row q maps source row q to q+1. Min-max parameters are fitted on
 * the training ratios only and applied to all of them.
 */
struct PreparedData {
    series::MultiSeries raw;
    series::SplitSizes sizes;
    series::LogRatioSeries ratios;
    series::ScaleParams scale;
    Matrix scaled;  // all log ratios, scaled
    Index train_ratios = 0;
    Index validation_first = 0;
    Index validation_count = 0;
    Index test_first = 0;  // first ratio index whose target row is in the test partition
    Index test_count = 0;

    [[nodiscard]] Matrix train_ratio_rows() const { return ratios.values.topRows(train_ratios); }
    [[nodiscard]] Matrix test_actuals() const { return raw.values().bottomRows(test_count); }
};

/// Split, log-ratio and scale. @throws Error(SeriesTooShort) when a partition cannot hold a window.
[[nodiscard]] PreparedData prepare(const series::MultiSeries& raw, const PipelineConfig& config);

[[nodiscard]] blocklen::BlockLenConfig blocklen_config(const PipelineConfig& config);

/// Scheme for resampling `rows` training rows with block length l; LBB locality is snapped so n*B is integral.
[[nodiscard]] bootstrap::BlockScheme resolve_scheme(const PipelineConfig& config, Index l, Index rows);

/**
 * Test-period predictions in original units. For a target ratio q the model is
 * rolled `horizon` steps from the scaled ratios before q-horizon+1, the
 * predicted ratios are unscaled, and the level is the source row
 * q-horizon+1 compounded by them.
 */
[[nodiscard]] Matrix predict_test(const forecaster::Forecaster& model, const PreparedData& data, Index lookback,
                                  Index horizon);

struct ReplicateOutcome {
    Matrix predictions;
    std::uint64_t bootstrap_seed = 0;
    std::uint64_t forecaster_seed = 0;
    std::string cache_key;
    bool from_cache = false;
    forecaster::TrainHistory history;  // empty for the baseline or cached replicates
    nlohmann::json checkpoint;         // set when save_models is on and the model was trained
};

struct PipelineRun {
    PipelineConfig config;
    PreparedData data;
    std::string data_digest;
    Index block_length = 0;
    std::optional<blocklen::ObjectiveCurve> curve;
    bootstrap::BlockScheme scheme;
    std::optional<forecaster::TuneResult> tuning;
    forecaster::TrainConfig train_config;
    std::vector<ReplicateOutcome> replicates;
    band::ConfidenceBand band;
    band::BandMetrics metrics;
    std::vector<std::pair<std::string, double>> timings_ms;
};

/// Digest of the series contents (canonical CSV form).
[[nodiscard]] std::string series_digest(const series::MultiSeries& raw);

/**
 * Runs prepare -> block length -> replicates (bootstrap, fit, predict) -> band -> metrics.
 * With a cache directory, replicate predictions are looked up and stored by content key.
 * Failures are rethrown as Error with the stage name and replicate index in the message.
 */
[[nodiscard]] PipelineRun run_pipeline(const series::MultiSeries& raw, const PipelineConfig& config,
                                       const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

}  // namespace blockband::pipeline
