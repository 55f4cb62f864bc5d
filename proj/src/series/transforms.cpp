#include "blockband/series/transforms.hpp"

#include "blockband/error.hpp"

#include <cmath>
#include <numeric>

namespace blockband::series {

LogRatioSeries log_ratio(const MultiSeries& series) {
    const Matrix& x = series.values();
    if (x.rows() < 2) {
        throw Error(ErrorCode::SeriesTooShort, "log-ratio needs at least 2 rows, got " + std::to_string(x.rows()));
    }
    for (Index t = 0; t < x.rows(); ++t) {
        for (Index j = 0; j < x.cols(); ++j) {
            if (!(x(t, j) > 0.0)) {
                throw Error(ErrorCode::NonPositiveValue,
                            "log-ratio needs strictly positive values; row " + std::to_string(t) + " feature '" +
                                series.feature_names()[static_cast<std::size_t>(j)] + "' is " +
                                std::to_string(x(t, j)));
            }
        }
    }
    LogRatioSeries out;
    out.values.resize(x.rows() - 1, x.cols());
    for (Index t = 0; t + 1 < x.rows(); ++t) {
        for (Index j = 0; j < x.cols(); ++j) {
            out.values(t, j) = std::log(x(t + 1, j)) - std::log(x(t, j));
        }
    }
    out.anchor = x.row(0);
    out.timestamps = series.timestamps();
    out.feature_names = series.feature_names();
    return out;
}

Matrix compound_ratios(const RowVector& anchor, const Matrix& ratios) {
    if (ratios.rows() > 0 && ratios.cols() != anchor.size()) {
        throw Error(ErrorCode::DimensionMismatch, "anchor width does not match ratio columns");
    }
    Matrix levels(ratios.rows() + 1, anchor.size());
    levels.row(0) = anchor;
    for (Index t = 0; t < ratios.rows(); ++t) {
        for (Index j = 0; j < anchor.size(); ++j) {
            levels(t + 1, j) = levels(t, j) * std::exp(ratios(t, j));
        }
    }
    return levels;
}

MultiSeries inverse_log_ratio(const LogRatioSeries& ratios) {
    if (!ratios.values.allFinite() || !ratios.anchor.allFinite()) {
        throw Error(ErrorCode::NonFiniteValue, "log-ratio series has non-finite entries");
    }
    Matrix levels = compound_ratios(ratios.anchor, ratios.values);
    std::vector<std::int64_t> ts = ratios.timestamps;
    if (static_cast<Index>(ts.size()) != levels.rows()) {
        ts.resize(static_cast<std::size_t>(levels.rows()));
        std::iota(ts.begin(), ts.end(), std::int64_t{0});
    }
    auto names = ratios.feature_names;
    if (static_cast<Index>(names.size()) != levels.cols()) {
        names = default_feature_names(levels.cols());
    }
    return MultiSeries(std::move(ts), std::move(levels), std::move(names));
}

ScaleParams fit_minmax(const Matrix& values) {
    if (values.rows() == 0) {
        throw Error(ErrorCode::SeriesTooShort, "cannot fit scaling on an empty series");
    }
    ScaleParams params{values.colwise().minCoeff(), values.colwise().maxCoeff()};
    for (Index j = 0; j < values.cols(); ++j) {
        if (!(params.max[j] > params.min[j])) {
            throw Error(ErrorCode::ConstantFeature, "feature " + std::to_string(j) + " is constant over the fit range");
        }
    }
    return params;
}

namespace {

void check_width(const Matrix& values, const ScaleParams& params) {
    if (params.min.size() != values.cols() || params.max.size() != values.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "scale parameters cover " + std::to_string(params.min.size()) +
                                                      " features, series has " + std::to_string(values.cols()));
    }
}

}  // namespace

Matrix apply_minmax(const Matrix& values, const ScaleParams& params) {
    check_width(values, params);
    Matrix out(values.rows(), values.cols());
    for (Index t = 0; t < values.rows(); ++t) {
        for (Index j = 0; j < values.cols(); ++j) {
            out(t, j) = (values(t, j) - params.min[j]) / (params.max[j] - params.min[j]);
        }
    }
    return out;
}

Matrix invert_minmax(const Matrix& values, const ScaleParams& params) {
    check_width(values, params);
    Matrix out(values.rows(), values.cols());
    for (Index t = 0; t < values.rows(); ++t) {
        for (Index j = 0; j < values.cols(); ++j) {
            out(t, j) = values(t, j) * (params.max[j] - params.min[j]) + params.min[j];
        }
    }
    return out;
}

ScaledSeries minmax_scale(const MultiSeries& series) {
    ScaleParams params = fit_minmax(series.values());
    return {minmax_scale(series, params), std::move(params)};
}

MultiSeries minmax_scale(const MultiSeries& series, const ScaleParams& params) {
    return MultiSeries(series.timestamps(), apply_minmax(series.values(), params), series.feature_names());
}

MultiSeries inverse_minmax(const MultiSeries& series, const ScaleParams& params) {
    return MultiSeries(series.timestamps(), invert_minmax(series.values(), params), series.feature_names());
}

SplitSizes split_sizes(Index n, const SplitFractions& f) {
    const bool positive = f.train > 0.0 && f.validation > 0.0 && f.test > 0.0;
    if (!positive || std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) {
        throw Error(ErrorCode::BadFractions, "split fractions must be positive and sum to 1");
    }
    SplitSizes sizes;
    sizes.train = static_cast<Index>(std::floor(static_cast<double>(n) * f.train));
    sizes.validation = static_cast<Index>(std::floor(static_cast<double>(n) * f.validation));
    sizes.test = n - sizes.train - sizes.validation;
    return sizes;
}

ChronoSplit chrono_split(const MultiSeries& series, const SplitFractions& fractions) {
    const SplitSizes sizes = split_sizes(series.length(), fractions);
    return {series.slice(0, sizes.train), series.slice(sizes.train, sizes.validation),
            series.slice(sizes.train + sizes.validation, sizes.test)};
}

}  // namespace blockband::series
