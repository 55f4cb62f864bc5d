#pragma once

#include "blockband/bootstrap/block_bootstrap.hpp"
#include "blockband/series/transforms.hpp"
#include "blockband/series/windows.hpp"
#include "blockband/types.hpp"

#include <cstdint>
#include <vector>

namespace blockband::blocklen {

/**
 * Running mean of the first i*l windows, position by position:
 * entry (k, j) = (1 / (i l)) * sum_{w < i l} windows[w, k, j].
 * `block` is 1-based. @throws Error(IndexOutOfRange) if block * l exceeds the window count.
 */
[[nodiscard]] Matrix filtered_mean(const series::WindowSet& windows, Index block, Index l);

/**
 * Mean over blocks i = 1..M of the mean squared difference between the
 * filtered means of `boot` and `original`, M = floor(n* / l) with n* the
 * original window count. `boot` must have the same (T, n_f) and at least M*l windows.
 * @throws Error(ShapeMismatch), Error(BlockTooLong) when M = 0.
 */
[[nodiscard]] double empirical_distance(const series::WindowSet& original, const series::WindowSet& boot, Index l);

/// l * ln(n*) / n*^alpha.
[[nodiscard]] double penalty(Index l, Index n_star, double alpha);

[[nodiscard]] inline double penalized_objective(double distance, Index l, Index n_star, double alpha) {
    return distance + penalty(l, n_star, alpha);
}

struct BlockLenConfig {
    Index lookback = 10;
    Index stride = 1;
    double alpha = 2.0;
    Index l_min = 1;
    Index l_max = 0;  // 0 selects floor(n* / 4)
    Index replicates = 10;
    bootstrap::Variant variant = bootstrap::Variant::NOBB;
    double lbb_locality = 0.1;  // snapped so that n* * B is integral
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

struct CurvePoint {
    Index l = 0;
    double distance = 0.0;
    double penalty = 0.0;
    double total = 0.0;
};

struct ObjectiveCurve {
    std::vector<CurvePoint> points;
    Index best_l = 0;
    Index n_star = 0;
    Index l_max = 0;
    double lbb_locality = 0.0;  // effective locality when the LBB scheme is used
};

/**
 * Evaluates the penalized objective for every l in [l_min, l_max] over
 * window-granularity bootstraps of the log-ratio rows and returns the curve and
 * its argmin (ties go to the smaller l). Replicate r of candidate l uses
 * derive_seed(seed, 0, l, r), so the result does not depend on `workers`.
 * @throws Error(BadConfig) on an invalid range or parameters.
 */
[[nodiscard]] ObjectiveCurve select_block_length(const Matrix& log_rows, const BlockLenConfig& config);
[[nodiscard]] ObjectiveCurve select_block_length(const series::LogRatioSeries& log_series,
                                                 const BlockLenConfig& config);

}  // namespace blockband::blocklen
