#include "blockband/series/windows.hpp"

#include "blockband/error.hpp"

#include <stdexcept>
#include <string>

namespace blockband::series {

WindowSet::WindowSet(Index count, Index lookback, Index features, Index stride, Index source_length)
    : count_(count),
      lookback_(lookback),
      features_(features),
      stride_(stride),
      source_length_(source_length),
      data_(static_cast<std::size_t>(count * lookback * features), 0.0) {}

Matrix WindowSet::window(Index index) const {
    if (index < 0 || index >= count_) {
        throw Error(ErrorCode::IndexOutOfRange, "window " + std::to_string(index) + " out of range");
    }
    Matrix out(lookback_, features_);
    for (Index k = 0; k < lookback_; ++k) {
        for (Index j = 0; j < features_; ++j) {
            out(k, j) = at(index, k, j);
        }
    }
    return out;
}

WindowSet WindowSet::reorder(std::span<const std::size_t> order) const {
    WindowSet out(static_cast<Index>(order.size()), lookback_, features_, stride_, source_length_);
    const auto block = static_cast<std::size_t>(lookback_ * features_);
    for (std::size_t w = 0; w < order.size(); ++w) {
        if (order[w] >= static_cast<std::size_t>(count_)) {
            throw Error(ErrorCode::IndexOutOfRange, "window index out of range in reorder");
        }
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(order[w] * block), block,
                    out.data_.begin() + static_cast<std::ptrdiff_t>(w * block));
    }
    return out;
}

Index window_count(Index n, Index lookback, Index stride) {
    if (lookback <= 0 || stride <= 0) {
        throw std::invalid_argument("look-back and stride must be positive");
    }
    if (n < lookback) {
        return 0;
    }
    return (n - lookback) / stride + 1;
}

WindowSet make_windows(const Matrix& rows, Index lookback, Index stride) {
    const Index n = rows.rows();
    const Index count = window_count(n, lookback, stride);
    if (count == 0) {
        throw Error(ErrorCode::SeriesTooShort,
                    "series of " + std::to_string(n) + " rows is shorter than look-back " + std::to_string(lookback));
    }
    WindowSet set(count, lookback, rows.cols(), stride, n);
    for (Index w = 0; w < count; ++w) {
        for (Index k = 0; k < lookback; ++k) {
            for (Index j = 0; j < rows.cols(); ++j) {
                set.at(w, k, j) = rows(w * stride + k, j);
            }
        }
    }
    return set;
}

}  // namespace blockband::series
