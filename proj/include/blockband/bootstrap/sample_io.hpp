#pragma once

#include "blockband/bootstrap/block_bootstrap.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace blockband::bootstrap {

/// Values as CSV with the given column names and a leading `row` column.
void write_sample_csv(std::ostream& out, const BootstrapSample& sample, const std::vector<std::string>& feature_names);

/// Audit sidecar: scheme, l, seed, generator, starts and full trace.
[[nodiscard]] nlohmann::json sample_sidecar(const BootstrapSample& sample);

/// Rebuild a sample from the sidecar and the source rows it was drawn from.
[[nodiscard]] BootstrapSample replay_sample(const nlohmann::json& sidecar, const Matrix& rows);

[[nodiscard]] nlohmann::json scheme_to_json(const BlockScheme& scheme);
[[nodiscard]] BlockScheme scheme_from_json(const nlohmann::json& j);

}  // namespace blockband::bootstrap
