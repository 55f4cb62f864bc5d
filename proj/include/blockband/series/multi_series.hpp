#pragma once

#include "blockband/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace blockband::series {

/**
 * @brief Multivariate time series: n observations of n_f features on a strictly
 * increasing time index.
 *
 * Time points are integer day numbers (days since 1970-01-01) so that CSV dates
 * and synthetic series share one representation. Immutable after construction.
 */
class MultiSeries {
public:
    MultiSeries() = default;

    /// @throws Error(ShapeMismatch) on inconsistent sizes, Error(NonFiniteValue) on NaN/Inf,
    ///         Error(ParseError) if the time index is not strictly increasing.
    MultiSeries(std::vector<std::int64_t> timestamps, Matrix values, std::vector<std::string> feature_names);

    /// Series on the index 0..n-1 with generated feature names f0, f1, ...
    static MultiSeries from_values(Matrix values);

    [[nodiscard]] Index length() const noexcept { return values_.rows(); }
    [[nodiscard]] Index num_features() const noexcept { return values_.cols(); }
    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<std::int64_t>& timestamps() const noexcept { return timestamps_; }
    [[nodiscard]] const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

    /// Contiguous rows [first, first + count).
    [[nodiscard]] MultiSeries slice(Index first, Index count) const;

private:
    std::vector<std::int64_t> timestamps_;
    Matrix values_;
    std::vector<std::string> feature_names_;
};

std::vector<std::string> default_feature_names(Index count);

}  // namespace blockband::series
