#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace blockband {

/// Row-major dense matrix; one row per time step, one column per feature.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

using Index = Eigen::Index;

}  // namespace blockband
