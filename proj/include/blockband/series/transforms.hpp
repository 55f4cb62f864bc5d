#pragma once

#include "blockband/series/multi_series.hpp"
#include "blockband/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace blockband::series {

/// Per-feature log ratios of consecutive rows plus the first source row, which
/// is all that is needed to rebuild the levels.
struct LogRatioSeries {
    Matrix values;  // (n-1) x n_f, row t = log(X[t+1] / X[t])
    RowVector anchor;
    std::vector<std::int64_t> timestamps;  // n entries, one per source row
    std::vector<std::string> feature_names;

    [[nodiscard]] Index num_features() const noexcept { return anchor.size(); }
};

struct ScaleParams {
    RowVector min;
    RowVector max;
};

/// @throws Error(NonPositiveValue) if any entry <= 0, Error(SeriesTooShort) if n < 2.
[[nodiscard]] LogRatioSeries log_ratio(const MultiSeries& series);

/// Row 0 is the anchor; row t+1 = row t * exp(values[t]).
[[nodiscard]] MultiSeries inverse_log_ratio(const LogRatioSeries& ratios);

/// Rebuild levels from an arbitrary anchor row and ratio matrix (no time index).
[[nodiscard]] Matrix compound_ratios(const RowVector& anchor, const Matrix& ratios);

/// Per-feature min and max. @throws Error(ConstantFeature) when max == min for some feature.
[[nodiscard]] ScaleParams fit_minmax(const Matrix& values);

[[nodiscard]] Matrix apply_minmax(const Matrix& values, const ScaleParams& params);
[[nodiscard]] Matrix invert_minmax(const Matrix& values, const ScaleParams& params);

struct ScaledSeries {
    MultiSeries series;
    ScaleParams params;
};

/// Fit min-max parameters on the series itself and scale it to [0, 1].
[[nodiscard]] ScaledSeries minmax_scale(const MultiSeries& series);

/// Scale with frozen parameters (e.g. fitted on the training partition).
[[nodiscard]] MultiSeries minmax_scale(const MultiSeries& series, const ScaleParams& params);

/// @throws Error(DimensionMismatch) when the parameter width differs from the series.
[[nodiscard]] MultiSeries inverse_minmax(const MultiSeries& series, const ScaleParams& params);

struct SplitFractions {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct SplitSizes {
    Index train = 0;
    Index validation = 0;
    Index test = 0;
};

/// train = floor(n * f_train), validation = floor(n * f_val), test gets the rest.
/// @throws Error(BadFractions) unless all fractions are positive and sum to 1 within 1e-9.
[[nodiscard]] SplitSizes split_sizes(Index n, const SplitFractions& fractions);

struct ChronoSplit {
    MultiSeries train;
    MultiSeries validation;
    MultiSeries test;
};

[[nodiscard]] ChronoSplit chrono_split(const MultiSeries& series, const SplitFractions& fractions);

}  // namespace blockband::series
