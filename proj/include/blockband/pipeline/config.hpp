#pragma once

#include "blockband/bootstrap/block_bootstrap.hpp"
#include "blockband/forecaster/training.hpp"
#include "blockband/series/transforms.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blockband::pipeline {

enum class ForecasterKind { Lstm, Baseline };

/**
 * @brief Everything a run depends on besides the input file contents.
 *
 * TOML layout (all keys optional except data.input):
 *
 *     [data]      input, features, split = [train, validation, test]
 *     [window]    lookback, stride, horizon
 *     [bootstrap] scheme = "nobb"|"mbb"|"lbb", block_length = "auto"|int,
 *                 mbb_blocks (0 = ceil(n/l) truncated to n), lbb_locality, replicates
 *     [blocklen]  alpha, l_min, l_max (0 = floor(n* / 4)), replicates
 *     [forecaster] kind = "lstm"|"baseline", ridge, batch_size, hidden_size, num_layers,
 *                 learning_rate, dropout_rate, activation, optimizer, epochs, patience, tune_budget
 *     [band]      level
 *     [run]       seed, workers, out, cache, save_models
 */
struct PipelineConfig {
    std::string input;
    std::vector<std::string> features;
    series::SplitFractions split;

    Index lookback = 10;
    Index stride = 1;
    Index horizon = 1;

    bootstrap::Variant scheme = bootstrap::Variant::LBB;
    std::optional<Index> block_length;  // nullopt = select automatically
    Index mbb_blocks = 0;
    double lbb_locality = 0.1;
    Index replicates = 100;

    double alpha = 2.0;
    Index l_min = 1;
    Index l_max = 0;
    Index blocklen_replicates = 10;

    ForecasterKind forecaster = ForecasterKind::Baseline;
    double ridge = 1e-3;
    forecaster::TrainConfig train;
    Index tune_budget = 0;

    double level = 0.95;

    std::uint64_t seed = 42;
    Index workers = 1;
    std::string out = "out";
    bool cache = true;
    bool save_models = false;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&);
};

/// Parses and validates; every problem found is reported in one Error(BadConfig).
[[nodiscard]] PipelineConfig config_from_json(const nlohmann::json& document);
[[nodiscard]] PipelineConfig parse_config(std::string_view toml_text);
[[nodiscard]] PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical JSON / TOML forms; both re-parse to an equal config.
[[nodiscard]] nlohmann::json config_to_json(const PipelineConfig& config);
[[nodiscard]] std::string config_to_toml(const PipelineConfig& config);

/// Cross-field checks that do not need the data. @throws Error(BadConfig) listing all problems.
void validate(const PipelineConfig& config);

}  // namespace blockband::pipeline
