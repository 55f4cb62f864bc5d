#include "blockband/forecaster/ridge.hpp"

#include "blockband/error.hpp"

#include <string>

namespace blockband::forecaster {

namespace {

RowVector flatten(const Matrix& window) {
    return Eigen::Map<const RowVector>(window.data(), window.size());
}

}  // namespace

RowVector RidgeModel::predict(const Matrix& window) const {
    if (window.rows() != lookback || window.size() != coefficients.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "window shape does not match the fitted look-back");
    }
    return flatten(window) * coefficients + intercept;
}

RidgeModel baseline_ar_fit(const SupervisedWindows& data, double ridge) {
    if (data.empty()) {
        throw Error(ErrorCode::SeriesTooShort, "no training samples");
    }
    if (!(ridge >= 0.0)) {
        throw Error(ErrorCode::BadConfig, "ridge penalty must be >= 0");
    }
    const Index n = data.size();
    const Index lookback = data.inputs.front().rows();
    const Index p = data.inputs.front().size();
    Matrix x(n, p);
    for (Index s = 0; s < n; ++s) {
        const Matrix& w = data.inputs[static_cast<std::size_t>(s)];
        if (w.size() != p) {
            throw Error(ErrorCode::ShapeMismatch, "input windows differ in shape");
        }
        x.row(s) = flatten(w);
    }
    const RowVector x_mean = x.colwise().mean();
    const RowVector y_mean = data.targets.colwise().mean();
    const Eigen::MatrixXd xc = x.rowwise() - x_mean;
    const Eigen::MatrixXd yc = data.targets.rowwise() - y_mean;

    RidgeModel model;
    model.lookback = lookback;
    model.ridge = ridge;
    if (ridge > 0.0) {
        Eigen::MatrixXd gram = xc.transpose() * xc;
        gram.diagonal().array() += ridge;
        model.coefficients = gram.ldlt().solve(xc.transpose() * yc);
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
        if (qr.rank() < p) {
            throw Error(ErrorCode::SingularSystem, "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                                                       std::to_string(p) + " and no ridge penalty");
        }
        model.coefficients = qr.solve(yc);
    }
    model.intercept = y_mean - x_mean * model.coefficients;
    return model;
}

}  // namespace blockband::forecaster
