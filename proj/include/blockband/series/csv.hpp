#pragma once

#include "blockband/series/multi_series.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace blockband::series {

/// Columns read when no explicit selection is given and the file has them all.
const std::vector<std::string>& default_ohlcv_features();

/**
 * Reads a `Date,<feature>...` CSV such as a finance-portal OHLCV export.
 *
 * With an empty selection, the OHLCV columns are used when present, otherwise
 * every non-date column except `Adj Close`. Rows with an empty or non-numeric
 * cell raise Error(ParseError) naming the 1-based file line and column; a file
 * with no data rows raises Error(EmptyFile).
 */
[[nodiscard]] MultiSeries read_series_csv(std::istream& in, const std::vector<std::string>& features = {});
[[nodiscard]] MultiSeries read_series_csv(const std::filesystem::path& path,
                                          const std::vector<std::string>& features = {});

/// Writes `Date,<features...>` with shortest round-trip number formatting.
void write_series_csv(std::ostream& out, const MultiSeries& series);

/// ISO-8601 calendar date (YYYY-MM-DD) to days since 1970-01-01.
[[nodiscard]] std::optional<std::int64_t> parse_iso_date(std::string_view text);
[[nodiscard]] std::string format_iso_date(std::int64_t days);

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Strict full-string parse; rejects empty text, trailing garbage and non-finite values.
[[nodiscard]] std::optional<double> parse_double(std::string_view text);

}  // namespace blockband::series
