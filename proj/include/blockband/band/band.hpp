#pragma once

#include "blockband/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace blockband::band {

/// Replicate predictions in original units: members[r] is T_test x n_f.
struct EnsemblePredictions {
    std::vector<Matrix> members;
    std::vector<std::uint64_t> seeds;  // optional per-replicate metadata

    [[nodiscard]] Index replicates() const noexcept { return static_cast<Index>(members.size()); }
};

/// Pointwise band with the actuals it is scored against.
struct ConfidenceBand {
    Matrix lower;
    Matrix upper;
    Matrix average;  // (upper + lower) / 2
    Matrix actual;
    double level = 0.95;
    std::vector<std::string> feature_names;
    std::vector<std::int64_t> timestamps;

    [[nodiscard]] Index steps() const noexcept { return lower.rows(); }
    [[nodiscard]] Index num_features() const noexcept { return lower.cols(); }
};

/**
 * Linear-interpolation quantile: sorted values v_1..v_B, position
 * h = 1 + (B - 1) p, result v_floor(h) + (h - floor(h)) (v_floor(h)+1 - v_floor(h)).
 * A rank within 1e-12 (relative) of an integer is taken as that integer.
 * `sorted` must be ascending and non-empty.
 */
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double p);

/**
 * Per-cell quantiles at (1 - level)/2 and (1 + level)/2 across replicates.
 * @throws Error(TooFewReplicates) for fewer than 2 members, Error(BadConfig) for level outside (0, 1),
 *         Error(ShapeMismatch) when members or actuals differ in shape.
 */
[[nodiscard]] ConfidenceBand percentile_band(const EnsemblePredictions& ensemble, double level, const Matrix& actual);

/// Per feature: mean over steps of |y - a|.
[[nodiscard]] Vector mad(const ConfidenceBand& band);
/// Per feature: mean over steps of (y - a)^2.
[[nodiscard]] Vector msd(const ConfidenceBand& band);
/// Per feature: sum over steps of |U - L| (a sum, not a mean).
[[nodiscard]] Vector abwd(const ConfidenceBand& band);

struct BandMetrics {
    std::vector<std::string> features;
    Vector mad;
    Vector msd;
    Vector abwd;
};

[[nodiscard]] BandMetrics compute_metrics(const ConfidenceBand& band);

}  // namespace blockband::band
