#include "blockband/blocklen/objective.hpp"

#include "blockband/error.hpp"
#include "blockband/parallel.hpp"
#include "blockband/rng.hpp"

#include <cmath>
#include <string>

namespace blockband::blocklen {

using series::WindowSet;

Matrix filtered_mean(const WindowSet& windows, Index block, Index l) {
    if (block < 1 || l < 1 || block * l > windows.count()) {
        throw Error(ErrorCode::IndexOutOfRange, "filtered mean over " + std::to_string(block * l) + " windows, only " +
                                                    std::to_string(windows.count()) + " available");
    }
    const Index used = block * l;
    Matrix mean = Matrix::Zero(windows.lookback(), windows.num_features());
    for (Index w = 0; w < used; ++w) {
        for (Index k = 0; k < windows.lookback(); ++k) {
            for (Index j = 0; j < windows.num_features(); ++j) {
                mean(k, j) += windows.at(w, k, j);
            }
        }
    }
    return mean / static_cast<double>(used);
}

double empirical_distance(const WindowSet& original, const WindowSet& boot, Index l) {
    if (original.lookback() != boot.lookback() || original.num_features() != boot.num_features()) {
        throw Error(ErrorCode::ShapeMismatch, "window sets differ in look-back or feature count");
    }
    if (l < 1) {
        throw Error(ErrorCode::BlockTooLong, "block length must be positive");
    }
    const Index blocks = original.count() / l;
    if (blocks == 0) {
        throw Error(ErrorCode::BlockTooLong, "block length " + std::to_string(l) + " exceeds window count " +
                                                 std::to_string(original.count()));
    }
    if (boot.count() < blocks * l) {
        throw Error(ErrorCode::ShapeMismatch, "bootstrap window set has too few windows");
    }
    const Index lookback = original.lookback();
    const Index features = original.num_features();
    const double cells = static_cast<double>(lookback * features);

    // Running sums give every filtered mean in one pass.
    Matrix sum_orig = Matrix::Zero(lookback, features);
    Matrix sum_boot = Matrix::Zero(lookback, features);
    double total = 0.0;
    for (Index i = 1; i <= blocks; ++i) {
        for (Index w = (i - 1) * l; w < i * l; ++w) {
            for (Index k = 0; k < lookback; ++k) {
                for (Index j = 0; j < features; ++j) {
                    sum_orig(k, j) += original.at(w, k, j);
                    sum_boot(k, j) += boot.at(w, k, j);
                }
            }
        }
        const double used = static_cast<double>(i * l);
        double squared = 0.0;
        for (Index j = 0; j < features; ++j) {
            for (Index k = 0; k < lookback; ++k) {
                const double diff = sum_boot(k, j) / used - sum_orig(k, j) / used;
                squared += diff * diff;
            }
        }
        total += squared / cells;
    }
    return total / static_cast<double>(blocks);
}

double penalty(Index l, Index n_star, double alpha) {
    const auto n = static_cast<double>(n_star);
    return static_cast<double>(l) * std::log(n) / std::pow(n, alpha);
}

ObjectiveCurve select_block_length(const Matrix& log_rows, const BlockLenConfig& config) {
    if (config.lookback < 1 || config.stride < 1) {
        throw Error(ErrorCode::BadConfig, "look-back and stride must be positive");
    }
    if (!(config.alpha > 0.0)) {
        throw Error(ErrorCode::BadConfig, "alpha must be positive");
    }
    if (config.replicates < 1) {
        throw Error(ErrorCode::BadConfig, "replicates must be at least 1");
    }
    const WindowSet original = series::make_windows(log_rows, config.lookback, config.stride);
    const Index n_star = original.count();
    if (n_star < 2) {
        throw Error(ErrorCode::SeriesTooShort, "block-length selection needs at least 2 windows");
    }
    const Index l_max = config.l_max == 0 ? n_star / 4 : config.l_max;
    if (config.l_min < 1 || l_max < config.l_min || l_max > n_star) {
        throw Error(ErrorCode::BadConfig, "block-length range [" + std::to_string(config.l_min) + ", " +
                                              std::to_string(l_max) + "] invalid for n* = " + std::to_string(n_star));
    }

    bootstrap::BlockScheme scheme;
    scheme.variant = config.variant;
    if (config.variant == bootstrap::Variant::LBB) {
        scheme.lbb_locality = bootstrap::snap_locality(n_star, config.lbb_locality);
    }

    const auto candidates = static_cast<std::size_t>(l_max - config.l_min + 1);
    const auto reps = static_cast<std::size_t>(config.replicates);
    std::vector<double> distances(candidates * reps, 0.0);
    parallel_for(candidates * reps, config.workers, [&](std::size_t task) {
        const Index l = config.l_min + static_cast<Index>(task / reps);
        const std::size_t r = task % reps;
        bootstrap::BlockScheme s = scheme;
        s.block_length = l;
        const auto trace =
            bootstrap::resample_trace(n_star, s, derive_seed(config.seed, 0, static_cast<std::uint64_t>(l), r));
        distances[task] = empirical_distance(original, original.reorder(trace), l);
    });

    ObjectiveCurve curve;
    curve.n_star = n_star;
    curve.l_max = l_max;
    curve.lbb_locality = config.variant == bootstrap::Variant::LBB ? scheme.lbb_locality : 0.0;
    curve.points.reserve(candidates);
    for (std::size_t c = 0; c < candidates; ++c) {
        CurvePoint point;
        point.l = config.l_min + static_cast<Index>(c);
        double sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            sum += distances[c * reps + r];
        }
        point.distance = sum / static_cast<double>(reps);
        point.penalty = penalty(point.l, n_star, config.alpha);
        point.total = point.distance + point.penalty;
        curve.points.push_back(point);
    }
    curve.best_l = curve.points.front().l;
    double best = curve.points.front().total;
    for (const auto& point : curve.points) {
        if (point.total < best) {
            best = point.total;
            curve.best_l = point.l;
        }
    }
    return curve;
}

ObjectiveCurve select_block_length(const series::LogRatioSeries& log_series, const BlockLenConfig& config) {
    return select_block_length(log_series.values, config);
}

}  // namespace blockband::blocklen
