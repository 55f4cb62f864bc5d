#pragma once

#include "blockband/types.hpp"

#include <vector>

namespace blockband::forecaster {

/// Input windows and the next-step row that follows each of them.
struct SupervisedWindows {
    std::vector<Matrix> inputs;  // each T x n_f
    Matrix targets;              // n_samples x n_f

    [[nodiscard]] Index size() const noexcept { return targets.rows(); }
    [[nodiscard]] bool empty() const noexcept { return targets.rows() == 0; }
};

/// Every sliding window of `rows`: sample s is rows [s, s+T) with target row s+T.
[[nodiscard]] SupervisedWindows make_supervised(const Matrix& rows, Index lookback);

/// Samples whose targets are rows [first_target, first_target + count); inputs are the T rows before each.
/// @throws Error(IndexOutOfRange) if first_target < T or the range overruns `rows`.
[[nodiscard]] SupervisedWindows make_supervised(const Matrix& rows, Index lookback, Index first_target, Index count);

}  // namespace blockband::forecaster
