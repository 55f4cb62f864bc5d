#pragma once

#include "blockband/series/multi_series.hpp"

#include <cstdint>

namespace blockband::pipeline {

struct SyntheticAr1 {
    Index length = 400;
    Index features = 3;
    double phi = 0.8;          // autoregressive coefficient
    double mean = 100.0;       // level every feature reverts to
    double noise_sd = 1.0;     // innovation standard deviation
    double correlation = 0.5;  // pairwise correlation of the innovations
    std::uint64_t seed = 7;
};

/**
 * Positive multivariate AR(1): x_t = mean + phi (x_{t-1} - mean) + e_t with
 * equicorrelated Gaussian innovations. Daily dates from 2018-01-01; features X1..Xk.
 */
[[nodiscard]] series::MultiSeries synthetic_ar1(const SyntheticAr1& spec);

}  // namespace blockband::pipeline
