#pragma once

#include "blockband/forecaster/supervised.hpp"
#include "blockband/types.hpp"

namespace blockband::forecaster {

/// Linear autoregression from a flattened T x n_f window (row-major) to the next row.
struct RidgeModel {
    Matrix coefficients;  // (T * n_f) x n_f
    RowVector intercept;  // n_f
    Index lookback = 0;
    double ridge = 0.0;

    [[nodiscard]] RowVector predict(const Matrix& window) const;
};

/**
 * Closed-form ridge regression on centred data; the intercept is not penalised.
 * ridge == 0 is ordinary least squares and throws Error(SingularSystem) when the
 * design is rank-deficient.
 */
[[nodiscard]] RidgeModel baseline_ar_fit(const SupervisedWindows& data, double ridge);

}  // namespace blockband::forecaster
