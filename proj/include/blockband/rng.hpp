#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace blockband {

/**
 * @brief Seedable, platform-independent random source.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard.
 * The standard distributions are implementation-defined, so every draw is
 * derived here from raw 64-bit words to keep traces reproducible across
 * toolchains.
 */
class Rng {
public:
    static constexpr std::string_view generator_name = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer on [0, bound); bound must be positive. Rejection sampling, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Uniform integer on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform01();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t value) noexcept;

/// Seed for bootstrap replicate r: master + r.
[[nodiscard]] constexpr std::uint64_t bootstrap_seed(std::uint64_t master, std::uint64_t replicate) noexcept {
    return master + replicate;
}

/// Seed for the forecaster of replicate r; distinct stream from bootstrap_seed.
[[nodiscard]] std::uint64_t forecaster_seed(std::uint64_t master, std::uint64_t replicate) noexcept;

/// Seed for an arbitrary (stream, a, b) triple; order-independent derivation for parallel work.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t a,
                                        std::uint64_t b = 0) noexcept;

}  // namespace blockband
