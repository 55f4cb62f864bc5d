#pragma once

#include "blockband/types.hpp"

#include <span>
#include <vector>

namespace blockband::series {

/**
 * @brief A series cut into look-back windows of T rows.
 *
 * Window w holds source rows [w * stride, w * stride + T). Storage is a flat
 * buffer indexed (window, step, feature).
 */
class WindowSet {
public:
    WindowSet() = default;
    WindowSet(Index count, Index lookback, Index features, Index stride, Index source_length);

    [[nodiscard]] Index count() const noexcept { return count_; }
    [[nodiscard]] Index lookback() const noexcept { return lookback_; }
    [[nodiscard]] Index num_features() const noexcept { return features_; }
    [[nodiscard]] Index stride() const noexcept { return stride_; }
    [[nodiscard]] Index source_length() const noexcept { return source_length_; }

    [[nodiscard]] double at(Index window, Index step, Index feature) const {
        return data_[offset(window, step, feature)];
    }
    double& at(Index window, Index step, Index feature) { return data_[offset(window, step, feature)]; }

    /// Copy of one window as a T x n_f matrix.
    [[nodiscard]] Matrix window(Index index) const;

    /// New set whose k-th window is this set's window order[k].
    [[nodiscard]] WindowSet reorder(std::span<const std::size_t> order) const;

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

private:
    [[nodiscard]] std::size_t offset(Index window, Index step, Index feature) const noexcept {
        return static_cast<std::size_t>((window * lookback_ + step) * features_ + feature);
    }

    Index count_ = 0;
    Index lookback_ = 0;
    Index features_ = 0;
    Index stride_ = 1;
    Index source_length_ = 0;
    std::vector<double> data_;
};

/// Number of windows: floor((n - T) / stride) + 1.
[[nodiscard]] Index window_count(Index n, Index lookback, Index stride);

/// @throws Error(SeriesTooShort) if n < T; std::invalid_argument for non-positive T or stride.
[[nodiscard]] WindowSet make_windows(const Matrix& rows, Index lookback, Index stride = 1);

}  // namespace blockband::series
