#pragma once

#include "blockband/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blockband::bootstrap {

enum class Variant { NOBB, MBB, LBB };

[[nodiscard]] std::string_view variant_name(Variant v) noexcept;
/// Case-insensitive; accepts "nobb", "mbb", "lbb". @throws Error(BadConfig).
[[nodiscard]] Variant parse_variant(std::string_view text);

struct BlockScheme {
    Variant variant = Variant::MBB;
    Index block_length = 1;
    /// MBB only; nullopt means ceil(n / l) blocks truncated to n rows.
    std::optional<Index> mbb_block_count;
    /// LBB only; n * locality must be an integer.
    double lbb_locality = 1.0;
};

/**
 * @brief One resampled series and the source rows it was built from.
 *
 * Row r of `values` equals source row `index_trace[r]` bit-for-bit; all
 * features of a row travel together.
 */
struct BootstrapSample {
    Matrix values;
    std::vector<std::size_t> index_trace;
    std::vector<std::size_t> block_starts;  // 0-based start of each drawn block
    BlockScheme scheme;
    std::uint64_t seed = 0;
};

/// Copies `l` consecutive rows from each start in order, stopping after `length` rows.
[[nodiscard]] BootstrapSample gather_blocks(const Matrix& rows, std::span<const std::size_t> starts, Index l,
                                            Index length);

// -- start-index laws (0-based starts) --

/// NOBB: floor(n/l) draws, each uniform over {0, l, 2l, ...}.
[[nodiscard]] std::vector<std::size_t> nobb_starts(Index n, Index l, std::uint64_t seed);
/// MBB: k draws uniform over [0, n - l].
[[nodiscard]] std::vector<std::size_t> mbb_starts(Index n, Index l, Index k, std::uint64_t seed);
/// LBB: block m starts uniformly on [J1(m), J2(m)] (1-based bounds, see lbb_bounds).
[[nodiscard]] std::vector<std::size_t> lbb_starts(Index n, Index l, double locality, std::uint64_t seed);

struct LbbBounds {
    Index j1;  // 1-based, inclusive
    Index j2;  // 1-based, inclusive
};

/// J1 = max{1, m*l - n*B}, J2 = min{n - l + 1, m*l + n*B}.
[[nodiscard]] LbbBounds lbb_bounds(Index n, Index l, double locality, Index m);

/// n * B as an integer. @throws Error(BadLocality) unless B in (0, 1] and n*B is integral within 1e-9.
[[nodiscard]] Index lbb_radius(Index n, double locality);

// -- schemes --

/// Non-overlapping block bootstrap; the trailing n mod l rows never appear.
[[nodiscard]] BootstrapSample nobb(const Matrix& rows, Index l, std::uint64_t seed);

/// Moving block bootstrap. With k unset, ceil(n/l) blocks are drawn and the
/// result is truncated to n rows; with k set, the output has k*l rows.
[[nodiscard]] BootstrapSample mbb(const Matrix& rows, Index l, std::optional<Index> k, std::uint64_t seed);

/// Local block bootstrap with locality B; output has l * floor(n/l) rows.
[[nodiscard]] BootstrapSample lbb(const Matrix& rows, Index l, double locality, std::uint64_t seed);

/// Dispatch on scheme.variant.
[[nodiscard]] BootstrapSample resample(const Matrix& rows, const BlockScheme& scheme, std::uint64_t seed);

/// Index-only variant of resample for callers that permute something other than rows.
[[nodiscard]] std::vector<std::size_t> resample_trace(Index n, const BlockScheme& scheme, std::uint64_t seed);

/// Validate 1 <= l <= n. @throws Error(BadBlockLength).
void check_block_length(Index n, Index l);

/// Nearest locality B' with n * B' a positive integer: max(1, round(n * B)) / n.
[[nodiscard]] double snap_locality(Index n, double locality);

}  // namespace blockband::bootstrap
