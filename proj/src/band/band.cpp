#include "blockband/band/band.hpp"

#include "blockband/error.hpp"

#include <algorithm>
#include <cmath>

namespace blockband::band {

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw Error(ErrorCode::TooFewReplicates, "quantile of an empty sample");
    }
    double h = static_cast<double>(sorted.size() - 1) * p;
    const double nearest = std::round(h);
    if (std::abs(h - nearest) <= 1e-12 * std::max(1.0, h)) {
        h = nearest;
    }
    const double floor_h = std::floor(h);
    const auto lo = static_cast<std::size_t>(floor_h);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + (h - floor_h) * (sorted[lo + 1] - sorted[lo]);
}

ConfidenceBand percentile_band(const EnsemblePredictions& ensemble, double level, const Matrix& actual) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::BadConfig, "band level must lie in (0, 1)");
    }
    if (ensemble.replicates() < 2) {
        throw Error(ErrorCode::TooFewReplicates,
                    "need at least 2 replicates, got " + std::to_string(ensemble.replicates()));
    }
    const Index steps = actual.rows();
    const Index features = actual.cols();
    for (const auto& member : ensemble.members) {
        if (member.rows() != steps || member.cols() != features) {
            throw Error(ErrorCode::ShapeMismatch, "ensemble member shape differs from actuals");
        }
        if (!member.allFinite()) {
            throw Error(ErrorCode::NonFiniteValue, "ensemble contains non-finite predictions");
        }
    }
    const double p_low = (1.0 - level) / 2.0;
    const double p_high = (1.0 + level) / 2.0;

    ConfidenceBand band;
    band.level = level;
    band.lower.resize(steps, features);
    band.upper.resize(steps, features);
    band.average.resize(steps, features);
    band.actual = actual;
    std::vector<double> cell(static_cast<std::size_t>(ensemble.replicates()));
    for (Index t = 0; t < steps; ++t) {
        for (Index j = 0; j < features; ++j) {
            for (std::size_t r = 0; r < cell.size(); ++r) {
                cell[r] = ensemble.members[r](t, j);
            }
            std::sort(cell.begin(), cell.end());
            band.lower(t, j) = quantile_sorted(cell, p_low);
            band.upper(t, j) = quantile_sorted(cell, p_high);
            band.average(t, j) = (band.upper(t, j) + band.lower(t, j)) / 2.0;
        }
    }
    return band;
}

Vector mad(const ConfidenceBand& band) {
    Vector out = Vector::Zero(band.num_features());
    for (Index j = 0; j < band.num_features(); ++j) {
        for (Index t = 0; t < band.steps(); ++t) {
            out[j] += std::abs(band.actual(t, j) - band.average(t, j));
        }
        out[j] /= static_cast<double>(band.steps());
    }
    return out;
}

Vector msd(const ConfidenceBand& band) {
    Vector out = Vector::Zero(band.num_features());
    for (Index j = 0; j < band.num_features(); ++j) {
        for (Index t = 0; t < band.steps(); ++t) {
            const double d = band.actual(t, j) - band.average(t, j);
            out[j] += d * d;
        }
        out[j] /= static_cast<double>(band.steps());
    }
    return out;
}

Vector abwd(const ConfidenceBand& band) {
    Vector out = Vector::Zero(band.num_features());
    for (Index j = 0; j < band.num_features(); ++j) {
        for (Index t = 0; t < band.steps(); ++t) {
            out[j] += std::abs(band.upper(t, j) - band.lower(t, j));
        }
    }
    return out;
}

BandMetrics compute_metrics(const ConfidenceBand& band) {
    BandMetrics m;
    m.features = band.feature_names;
    if (static_cast<Index>(m.features.size()) != band.num_features()) {
        m.features.clear();
        for (Index j = 0; j < band.num_features(); ++j) {
            m.features.push_back("f" + std::to_string(j));
        }
    }
    m.mad = mad(band);
    m.msd = msd(band);
    m.abwd = abwd(band);
    return m;
}

}  // namespace blockband::band
