#include "blockband/pipeline/synthetic.hpp"

#include "blockband/error.hpp"
#include "blockband/rng.hpp"
#include "blockband/series/csv.hpp"

#include <cmath>

namespace blockband::pipeline {

series::MultiSeries synthetic_ar1(const SyntheticAr1& spec) {
    if (spec.length < 2 || spec.features < 1 || !(std::abs(spec.phi) < 1.0) || spec.correlation < 0.0 ||
        spec.correlation > 1.0) {
        throw Error(ErrorCode::BadConfig, "invalid synthetic AR(1) parameters");
    }
    Rng rng(spec.seed);
    const double common = std::sqrt(spec.correlation);
    const double own = std::sqrt(1.0 - spec.correlation);
    Matrix values(spec.length, spec.features);
    values.row(0).setConstant(spec.mean);
    for (Index t = 1; t < spec.length; ++t) {
        const double shared = rng.normal();
        for (Index j = 0; j < spec.features; ++j) {
            const double shock = spec.noise_sd * (common * shared + own * rng.normal());
            values(t, j) = spec.mean + spec.phi * (values(t - 1, j) - spec.mean) + shock;
        }
    }
    if ((values.array() <= 0.0).any()) {
        throw Error(ErrorCode::NonPositiveValue, "synthetic series went non-positive; lower noise_sd");
    }
    const std::int64_t start = *series::parse_iso_date("2018-01-01");
    std::vector<std::int64_t> dates(static_cast<std::size_t>(spec.length));
    for (std::size_t t = 0; t < dates.size(); ++t) {
        dates[t] = start + static_cast<std::int64_t>(t);
    }
    std::vector<std::string> names;
    for (Index j = 0; j < spec.features; ++j) {
        names.push_back("X" + std::to_string(j + 1));
    }
    return series::MultiSeries(std::move(dates), std::move(values), std::move(names));
}

}  // namespace blockband::pipeline
