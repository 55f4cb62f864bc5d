#pragma once

#include "blockband/band/band.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>

namespace blockband::band {

/// `t,feature,y,lower,avg,upper`, one row per (step, feature), steps outermost.
/// `t` is the ISO date of the step; numbers use shortest round-trip form.
void write_band_csv(std::ostream& out, const ConfidenceBand& band);

/// Inverse of write_band_csv. @throws Error(ParseError) on malformed or truncated input.
[[nodiscard]] ConfidenceBand read_band_csv(std::istream& in);

/// {"<feature>": {"mad": .., "msd": .., "abwd": ..}, ...}
[[nodiscard]] nlohmann::json metrics_json(const BandMetrics& metrics);

}  // namespace blockband::band
