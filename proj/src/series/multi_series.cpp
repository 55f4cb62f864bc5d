#include "blockband/series/multi_series.hpp"

#include "blockband/error.hpp"

#include <cmath>

namespace blockband::series {

MultiSeries::MultiSeries(std::vector<std::int64_t> timestamps, Matrix values, std::vector<std::string> feature_names)
    : timestamps_(std::move(timestamps)), values_(std::move(values)), feature_names_(std::move(feature_names)) {
    if (static_cast<Index>(timestamps_.size()) != values_.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "timestamp count " + std::to_string(timestamps_.size()) +
                                                  " does not match row count " + std::to_string(values_.rows()));
    }
    if (static_cast<Index>(feature_names_.size()) != values_.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "feature name count does not match column count");
    }
    for (std::size_t t = 1; t < timestamps_.size(); ++t) {
        if (timestamps_[t] <= timestamps_[t - 1]) {
            throw Error(ErrorCode::ParseError, "time index not strictly increasing at row " + std::to_string(t));
        }
    }
    if (!values_.allFinite()) {
        throw Error(ErrorCode::NonFiniteValue, "series contains NaN or infinite values");
    }
}

MultiSeries MultiSeries::from_values(Matrix values) {
    std::vector<std::int64_t> index(static_cast<std::size_t>(values.rows()));
    for (std::size_t t = 0; t < index.size(); ++t) {
        index[t] = static_cast<std::int64_t>(t);
    }
    auto names = default_feature_names(values.cols());
    return MultiSeries(std::move(index), std::move(values), std::move(names));
}

MultiSeries MultiSeries::slice(Index first, Index count) const {
    if (first < 0 || count < 0 || first + count > length()) {
        throw Error(ErrorCode::IndexOutOfRange, "slice outside series");
    }
    std::vector<std::int64_t> ts(timestamps_.begin() + first, timestamps_.begin() + first + count);
    return MultiSeries(std::move(ts), values_.middleRows(first, count), feature_names_);
}

std::vector<std::string> default_feature_names(Index count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (Index j = 0; j < count; ++j) {
        names.push_back("f" + std::to_string(j));
    }
    return names;
}

}  // namespace blockband::series
