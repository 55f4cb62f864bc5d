#include "blockband/forecaster/supervised.hpp"

#include "blockband/error.hpp"

#include <string>

namespace blockband::forecaster {

SupervisedWindows make_supervised(const Matrix& rows, Index lookback) {
    if (lookback < 1) {
        throw Error(ErrorCode::BadConfig, "look-back must be positive");
    }
    if (rows.rows() <= lookback) {
        throw Error(ErrorCode::SeriesTooShort, "need more than " + std::to_string(lookback) + " rows, got " +
                                                   std::to_string(rows.rows()));
    }
    return make_supervised(rows, lookback, lookback, rows.rows() - lookback);
}

SupervisedWindows make_supervised(const Matrix& rows, Index lookback, Index first_target, Index count) {
    if (lookback < 1) {
        throw Error(ErrorCode::BadConfig, "look-back must be positive");
    }
    if (first_target < lookback || count < 0 || first_target + count > rows.rows()) {
        throw Error(ErrorCode::IndexOutOfRange, "target range [" + std::to_string(first_target) + ", " +
                                                    std::to_string(first_target + count) +
                                                    ") not available with look-back " + std::to_string(lookback));
    }
    SupervisedWindows data;
    data.inputs.reserve(static_cast<std::size_t>(count));
    data.targets.resize(count, rows.cols());
    for (Index s = 0; s < count; ++s) {
        const Index target = first_target + s;
        data.inputs.emplace_back(rows.middleRows(target - lookback, lookback));
        data.targets.row(s) = rows.row(target);
    }
    return data;
}

}  // namespace blockband::forecaster
