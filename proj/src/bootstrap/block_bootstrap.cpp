#include "blockband/bootstrap/block_bootstrap.hpp"

#include "blockband/error.hpp"
#include "blockband/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace blockband::bootstrap {

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
        case Variant::NOBB: return "nobb";
        case Variant::MBB: return "mbb";
        case Variant::LBB: return "lbb";
    }
    return "unknown";
}

Variant parse_variant(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "nobb") return Variant::NOBB;
    if (lower == "mbb") return Variant::MBB;
    if (lower == "lbb") return Variant::LBB;
    throw Error(ErrorCode::BadConfig, "unknown bootstrap scheme '" + std::string(text) + "' (expected nobb, mbb or lbb)");
}

void check_block_length(Index n, Index l) {
    if (l < 1 || l > n) {
        throw Error(ErrorCode::BadBlockLength,
                    "block length " + std::to_string(l) + " outside [1, " + std::to_string(n) + "]");
    }
}

BootstrapSample gather_blocks(const Matrix& rows, std::span<const std::size_t> starts, Index l, Index length) {
    const Index n = rows.rows();
    check_block_length(n, l);
    BootstrapSample sample;
    sample.values.resize(length, rows.cols());
    sample.index_trace.reserve(static_cast<std::size_t>(length));
    sample.block_starts.assign(starts.begin(), starts.end());
    Index out = 0;
    for (std::size_t start : starts) {
        if (static_cast<Index>(start) + l > n) {
            throw Error(ErrorCode::IndexOutOfRange, "block start " + std::to_string(start) + " overruns series");
        }
        for (Index j = 0; j < l && out < length; ++j, ++out) {
            const auto src = start + static_cast<std::size_t>(j);
            sample.values.row(out) = rows.row(static_cast<Index>(src));
            sample.index_trace.push_back(src);
        }
    }
    if (out != length) {
        throw Error(ErrorCode::ShapeMismatch, "not enough blocks to fill the requested length");
    }
    return sample;
}

std::vector<std::size_t> nobb_starts(Index n, Index l, std::uint64_t seed) {
    check_block_length(n, l);
    const Index b = n / l;
    Rng rng(seed);
    std::vector<std::size_t> starts(static_cast<std::size_t>(b));
    for (auto& s : starts) {
        s = static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(b)) * static_cast<std::uint64_t>(l));
    }
    return starts;
}

std::vector<std::size_t> mbb_starts(Index n, Index l, Index k, std::uint64_t seed) {
    check_block_length(n, l);
    if (k < 1) {
        throw Error(ErrorCode::BadBlockLength, "MBB block count must be positive");
    }
    const auto candidates = static_cast<std::uint64_t>(n - l + 1);
    Rng rng(seed);
    std::vector<std::size_t> starts(static_cast<std::size_t>(k));
    for (auto& s : starts) {
        s = static_cast<std::size_t>(rng.uniform_index(candidates));
    }
    return starts;
}

Index lbb_radius(Index n, double locality) {
    if (!(locality > 0.0 && locality <= 1.0)) {
        throw Error(ErrorCode::BadLocality, "LBB locality must lie in (0, 1]");
    }
    const double nb = static_cast<double>(n) * locality;
    const double rounded = std::round(nb);
    if (std::abs(nb - rounded) > 1e-9) {
        throw Error(ErrorCode::BadLocality,
                    "n * B = " + std::to_string(nb) + " is not an integer (n = " + std::to_string(n) + ")");
    }
    return static_cast<Index>(rounded);
}

double snap_locality(Index n, double locality) {
    if (!(locality > 0.0 && locality <= 1.0) || n < 1) {
        throw Error(ErrorCode::BadLocality, "LBB locality must lie in (0, 1]");
    }
    const double radius = std::max(1.0, std::round(static_cast<double>(n) * locality));
    return radius / static_cast<double>(n);
}

LbbBounds lbb_bounds(Index n, Index l, double locality, Index m) {
    check_block_length(n, l);
    const Index radius = lbb_radius(n, locality);
    return {std::max<Index>(1, m * l - radius), std::min<Index>(n - l + 1, m * l + radius)};
}

std::vector<std::size_t> lbb_starts(Index n, Index l, double locality, std::uint64_t seed) {
    check_block_length(n, l);
    const Index radius = lbb_radius(n, locality);
    const Index blocks = n / l;
    Rng rng(seed);
    std::vector<std::size_t> starts(static_cast<std::size_t>(blocks));
    for (Index m = 0; m < blocks; ++m) {
        const Index j1 = std::max<Index>(1, m * l - radius);
        const Index j2 = std::min<Index>(n - l + 1, m * l + radius);
        starts[static_cast<std::size_t>(m)] = static_cast<std::size_t>(rng.uniform_int(j1, j2) - 1);
    }
    return starts;
}

BootstrapSample nobb(const Matrix& rows, Index l, std::uint64_t seed) {
    const Index n = rows.rows();
    const auto starts = nobb_starts(n, l, seed);
    BootstrapSample sample = gather_blocks(rows, starts, l, l * (n / l));
    sample.scheme = {Variant::NOBB, l, std::nullopt, 1.0};
    sample.seed = seed;
    return sample;
}

BootstrapSample mbb(const Matrix& rows, Index l, std::optional<Index> k, std::uint64_t seed) {
    const Index n = rows.rows();
    check_block_length(n, l);
    const Index blocks = k.value_or((n + l - 1) / l);
    const Index length = k ? blocks * l : n;
    const auto starts = mbb_starts(n, l, blocks, seed);
    BootstrapSample sample = gather_blocks(rows, starts, l, length);
    sample.scheme = {Variant::MBB, l, k, 1.0};
    sample.seed = seed;
    return sample;
}

BootstrapSample lbb(const Matrix& rows, Index l, double locality, std::uint64_t seed) {
    const Index n = rows.rows();
    const auto starts = lbb_starts(n, l, locality, seed);
    BootstrapSample sample = gather_blocks(rows, starts, l, l * (n / l));
    sample.scheme = {Variant::LBB, l, std::nullopt, locality};
    sample.seed = seed;
    return sample;
}

BootstrapSample resample(const Matrix& rows, const BlockScheme& scheme, std::uint64_t seed) {
    switch (scheme.variant) {
        case Variant::NOBB: return nobb(rows, scheme.block_length, seed);
        case Variant::MBB: return mbb(rows, scheme.block_length, scheme.mbb_block_count, seed);
        case Variant::LBB: return lbb(rows, scheme.block_length, scheme.lbb_locality, seed);
    }
    throw Error(ErrorCode::BadConfig, "unknown scheme");
}

std::vector<std::size_t> resample_trace(Index n, const BlockScheme& scheme, std::uint64_t seed) {
    const Index l = scheme.block_length;
    std::vector<std::size_t> starts;
    Index length = 0;
    switch (scheme.variant) {
        case Variant::NOBB:
            starts = nobb_starts(n, l, seed);
            length = l * (n / l);
            break;
        case Variant::MBB: {
            check_block_length(n, l);
            const Index blocks = scheme.mbb_block_count.value_or((n + l - 1) / l);
            starts = mbb_starts(n, l, blocks, seed);
            length = scheme.mbb_block_count ? blocks * l : n;
            break;
        }
        case Variant::LBB:
            starts = lbb_starts(n, l, scheme.lbb_locality, seed);
            length = l * (n / l);
            break;
    }
    std::vector<std::size_t> trace;
    trace.reserve(static_cast<std::size_t>(length));
    for (std::size_t start : starts) {
        for (Index j = 0; j < l && static_cast<Index>(trace.size()) < length; ++j) {
            trace.push_back(start + static_cast<std::size_t>(j));
        }
    }
    return trace;
}

}  // namespace blockband::bootstrap
