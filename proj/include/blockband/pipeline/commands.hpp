#pragma once

#include "blockband/pipeline/config.hpp"
#include "blockband/pipeline/pipeline.hpp"
#include "blockband/series/multi_series.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace blockband::pipeline {

struct IngestSummary {
    Index rows = 0;
    std::string first_date;
    std::string last_date;
    std::vector<std::string> features;
    std::vector<double> min;
    std::vector<double> max;
};

[[nodiscard]] IngestSummary summarize(const series::MultiSeries& series);
void print_summary(std::ostream& out, const IngestSummary& summary);

/// Reads and validates a CSV and prints its summary.
IngestSummary cmd_ingest(const std::filesystem::path& path, const std::vector<std::string>& features,
                         std::ostream& out);

/// Writes blocklen_curve.csv and blocklen.json into config.out.
blocklen::ObjectiveCurve cmd_select_block_length(const PipelineConfig& config, std::ostream& log);

/**
 * Draws config.replicates bootstrap samples of the training log ratios and
 * writes samples/sample_<r>.csv with a samples/sample_<r>.json sidecar each.
 * An "auto" block length is selected first.
 */
bootstrap::BlockScheme cmd_bootstrap(const PipelineConfig& config, std::ostream& log);

/**
 * Full run. Writes band.csv, metrics.json, manifest.json and, when the block
 * length was selected, blocklen_curve.csv and blocklen.json; models/ holds
 * checkpoints when save_models is set. Returns the manifest.
 */
nlohmann::json cmd_pipeline(const PipelineConfig& config, std::ostream& log);

/// Metrics recomputed from a band CSV alone.
[[nodiscard]] nlohmann::json cmd_evaluate(const std::filesystem::path& band_csv);

/// The configuration recorded in a manifest. @throws Error(ParseError) when the manifest is malformed.
[[nodiscard]] PipelineConfig config_from_manifest(const std::filesystem::path& manifest);

/// Serialized forms shared by the commands.
[[nodiscard]] std::string curve_csv(const blocklen::ObjectiveCurve& curve);
[[nodiscard]] nlohmann::json curve_summary(const blocklen::ObjectiveCurve& curve, const PipelineConfig& config);
[[nodiscard]] std::string dump_json(const nlohmann::json& j);

}  // namespace blockband::pipeline
