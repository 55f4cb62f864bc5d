#pragma once

#include "blockband/types.hpp"

#include <memory>
#include <string_view>

namespace blockband::forecaster {

enum class OptimizerKind { Adam, RMSprop, SGD, Adagrad, Adamax };

[[nodiscard]] std::string_view optimizer_name(OptimizerKind kind) noexcept;
[[nodiscard]] OptimizerKind parse_optimizer(std::string_view text);

/// First-order update rule over a flat parameter vector. Moment constants follow
/// the common framework defaults (beta1 0.9, beta2 0.999, rho 0.9, eps 1e-7).
class Optimizer {
public:
    virtual ~Optimizer() = default;
    virtual void step(Vector& params, const Vector& gradient) = 0;
};

[[nodiscard]] std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double learning_rate, Index size);

}  // namespace blockband::forecaster
