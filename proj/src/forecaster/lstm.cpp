#include "blockband/forecaster/lstm.hpp"

#include "blockband/error.hpp"
#include "blockband/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

namespace blockband::forecaster {

namespace {

constexpr std::array<Gate, 4> kGates{Gate::Input, Gate::Forget, Gate::Cell, Gate::Output};
constexpr std::array<Gate, 3> kPeepholeGates{Gate::Input, Gate::Forget, Gate::Output};
constexpr std::array<const char*, 4> kGateNames{"i", "f", "c", "o"};

constexpr int kInputWeights = 0;
constexpr int kRecurrentWeights = 1;
constexpr int kPeephole = 2;
constexpr int kBias = 3;
constexpr std::size_t kSlotsPerLayer = 15;

int peephole_position(Gate gate) {
    switch (gate) {
        case Gate::Input: return 0;
        case Gate::Forget: return 1;
        case Gate::Output: return 2;
        case Gate::Cell: break;
    }
    throw Error(ErrorCode::IndexOutOfRange, "the cell gate has no peephole weights");
}

Vector sigmoid(const Vector& a) {
    return a.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Vector tanh_vec(const Vector& a) {
    return a.unaryExpr([](double v) { return std::tanh(v); });
}

Vector activate(const Vector& a, Activation act) {
    switch (act) {
        case Activation::Relu: return a.cwiseMax(0.0);
        case Activation::Silu: return a.unaryExpr([](double v) { return v / (1.0 + std::exp(-v)); });
        case Activation::Sigmoid: return sigmoid(a);
        case Activation::Tanh: return tanh_vec(a);
    }
    return a;
}

Vector activate_derivative(const Vector& a, Activation act) {
    switch (act) {
        case Activation::Relu: return a.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
        case Activation::Silu:
            return a.unaryExpr([](double v) {
                const double s = 1.0 / (1.0 + std::exp(-v));
                return s * (1.0 + v * (1.0 - s));
            });
        case Activation::Sigmoid: {
            const Vector s = sigmoid(a);
            return s.cwiseProduct((1.0 - s.array()).matrix());
        }
        case Activation::Tanh: {
            const Vector t = tanh_vec(a);
            return (1.0 - t.array().square()).matrix();
        }
    }
    return Vector::Ones(a.size());
}

}  // namespace

std::string_view activation_name(Activation a) noexcept {
    switch (a) {
        case Activation::Relu: return "relu";
        case Activation::Silu: return "silu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
    }
    return "unknown";
}

Activation parse_activation(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "relu") return Activation::Relu;
    if (lower == "silu") return Activation::Silu;
    if (lower == "sigmoid") return Activation::Sigmoid;
    if (lower == "tanh") return Activation::Tanh;
    throw Error(ErrorCode::BadConfig, "unknown activation '" + std::string(text) + "'");
}

LstmParams::LstmParams(const LstmArchitecture& arch) : arch_(arch) {
    if (arch.features < 1 || arch.hidden < 1 || arch.layers < 1) {
        throw Error(ErrorCode::BadConfig, "LSTM dimensions must be positive");
    }
    Index offset = 0;
    auto add = [&](std::string name, Index rows, Index cols) {
        slots_.push_back({std::move(name), offset, rows, cols});
        offset += rows * cols;
    };
    const Index h = arch.hidden;
    for (Index layer = 0; layer < arch.layers; ++layer) {
        const std::string prefix = "layer" + std::to_string(layer) + ".";
        const Index in = layer_input_size(layer);
        for (std::size_t g = 0; g < 4; ++g) add(prefix + "W_x" + kGateNames[g], h, in);
        for (std::size_t g = 0; g < 4; ++g) add(prefix + "W_h" + kGateNames[g], h, h);
        for (Gate g : kPeepholeGates) add(prefix + "w_c" + kGateNames[static_cast<int>(g)], h, 1);
        for (std::size_t g = 0; g < 4; ++g) add(prefix + "b_" + kGateNames[g], h, 1);
    }
    add("readout.W", arch.features, h);
    add("readout.b", arch.features, 1);
    data_ = Vector::Zero(offset);
}

LstmParams LstmParams::random(const LstmArchitecture& arch, Rng& rng) {
    LstmParams params(arch);
    const double bound = 1.0 / std::sqrt(static_cast<double>(arch.hidden));
    for (const auto& s : params.slots_) {
        const bool is_bias = s.name.find(".b_") != std::string::npos || s.name == "readout.b";
        for (Index k = 0; k < s.rows * s.cols; ++k) {
            params.data_[s.offset + k] = is_bias ? 0.0 : rng.uniform(-bound, bound);
        }
    }
    for (Index layer = 0; layer < arch.layers; ++layer) {
        params.bias(layer, Gate::Forget).setOnes();
    }
    return params;
}

std::size_t LstmParams::slot_index(Index layer, int kind, int gate) const {
    if (layer < 0 || layer >= arch_.layers) {
        throw Error(ErrorCode::IndexOutOfRange, "layer " + std::to_string(layer) + " out of range");
    }
    std::size_t within = 0;
    switch (kind) {
        case kInputWeights: within = static_cast<std::size_t>(gate); break;
        case kRecurrentWeights: within = 4 + static_cast<std::size_t>(gate); break;
        case kPeephole: within = 8 + static_cast<std::size_t>(gate); break;
        case kBias: within = 11 + static_cast<std::size_t>(gate); break;
        default: break;
    }
    return static_cast<std::size_t>(layer) * kSlotsPerLayer + within;
}

LstmParams::MatrixMap LstmParams::matrix_view(std::size_t index) {
    const TensorSlot& s = slots_[index];
    return {data_.data() + s.offset, s.rows, s.cols};
}
LstmParams::ConstMatrixMap LstmParams::matrix_view(std::size_t index) const {
    const TensorSlot& s = slots_[index];
    return {data_.data() + s.offset, s.rows, s.cols};
}
LstmParams::VectorMap LstmParams::vector_view(std::size_t index) {
    const TensorSlot& s = slots_[index];
    return {data_.data() + s.offset, s.rows};
}
LstmParams::ConstVectorMap LstmParams::vector_view(std::size_t index) const {
    const TensorSlot& s = slots_[index];
    return {data_.data() + s.offset, s.rows};
}

LstmParams::MatrixMap LstmParams::input_weights(Index layer, Gate gate) {
    return matrix_view(slot_index(layer, kInputWeights, static_cast<int>(gate)));
}
LstmParams::MatrixMap LstmParams::recurrent_weights(Index layer, Gate gate) {
    return matrix_view(slot_index(layer, kRecurrentWeights, static_cast<int>(gate)));
}
LstmParams::VectorMap LstmParams::peephole(Index layer, Gate gate) {
    return vector_view(slot_index(layer, kPeephole, peephole_position(gate)));
}
LstmParams::VectorMap LstmParams::bias(Index layer, Gate gate) {
    return vector_view(slot_index(layer, kBias, static_cast<int>(gate)));
}
LstmParams::MatrixMap LstmParams::readout_weights() { return matrix_view(slots_.size() - 2); }
LstmParams::VectorMap LstmParams::readout_bias() { return vector_view(slots_.size() - 1); }

LstmParams::ConstMatrixMap LstmParams::input_weights(Index layer, Gate gate) const {
    return matrix_view(slot_index(layer, kInputWeights, static_cast<int>(gate)));
}
LstmParams::ConstMatrixMap LstmParams::recurrent_weights(Index layer, Gate gate) const {
    return matrix_view(slot_index(layer, kRecurrentWeights, static_cast<int>(gate)));
}
LstmParams::ConstVectorMap LstmParams::peephole(Index layer, Gate gate) const {
    return vector_view(slot_index(layer, kPeephole, peephole_position(gate)));
}
LstmParams::ConstVectorMap LstmParams::bias(Index layer, Gate gate) const {
    return vector_view(slot_index(layer, kBias, static_cast<int>(gate)));
}
LstmParams::ConstMatrixMap LstmParams::readout_weights() const { return matrix_view(slots_.size() - 2); }
LstmParams::ConstVectorMap LstmParams::readout_bias() const { return vector_view(slots_.size() - 1); }

std::pair<Index, Index> LstmParams::readout_range() const noexcept {
    return {slots_[slots_.size() - 2].offset, data_.size()};
}

CellStep lstm_cell(const Vector& x, const Vector& h_prev, const Vector& c_prev, const LstmParams& params,
                   Index layer) {
    const Index hidden = params.architecture().hidden;
    if (x.size() != params.layer_input_size(layer) || h_prev.size() != hidden || c_prev.size() != hidden) {
        throw Error(ErrorCode::ShapeMismatch, "lstm_cell input sizes do not match the parameters");
    }
    CellStep step;
    step.x = x;
    step.h_prev = h_prev;
    step.c_prev = c_prev;

    auto pre = [&](Gate g) -> Vector {
        return params.input_weights(layer, g) * x + params.recurrent_weights(layer, g) * h_prev + params.bias(layer, g);
    };
    step.input_gate = sigmoid(pre(Gate::Input) + params.peephole(layer, Gate::Input).cwiseProduct(c_prev));
    step.forget_gate = sigmoid(pre(Gate::Forget) + params.peephole(layer, Gate::Forget).cwiseProduct(c_prev));
    step.candidate = tanh_vec(pre(Gate::Cell));
    step.c = step.forget_gate.cwiseProduct(c_prev) + step.input_gate.cwiseProduct(step.candidate);
    step.output_gate = sigmoid(pre(Gate::Output) + params.peephole(layer, Gate::Output).cwiseProduct(step.c));
    step.tanh_c = tanh_vec(step.c);
    step.h = step.output_gate.cwiseProduct(step.tanh_c);
    return step;
}

DropoutMasks sample_dropout_masks(const LstmArchitecture& arch, Index steps, double rate, Rng& rng) {
    DropoutMasks masks(static_cast<std::size_t>(std::max<Index>(0, arch.layers - 1)));
    const double keep = 1.0 - rate;
    for (auto& layer : masks) {
        layer.resize(static_cast<std::size_t>(steps));
        for (auto& mask : layer) {
            mask.resize(arch.hidden);
            for (Index k = 0; k < arch.hidden; ++k) {
                mask[k] = rng.uniform01() < keep ? 1.0 / keep : 0.0;
            }
        }
    }
    return masks;
}

Vector forward(const Matrix& sequence, const LstmParams& params, ForwardCache* cache, const DropoutMasks* masks) {
    const LstmArchitecture& arch = params.architecture();
    const Index steps = sequence.rows();
    if (steps < 1 || sequence.cols() != arch.features) {
        throw Error(ErrorCode::ShapeMismatch, "sequence must be T x " + std::to_string(arch.features) + " with T >= 1");
    }
    if (cache) {
        cache->steps.assign(static_cast<std::size_t>(arch.layers), {});
    }
    std::vector<Vector> layer_input(static_cast<std::size_t>(steps));
    for (Index t = 0; t < steps; ++t) {
        layer_input[static_cast<std::size_t>(t)] = sequence.row(t).transpose();
    }
    Vector h_top;
    for (Index layer = 0; layer < arch.layers; ++layer) {
        Vector h = Vector::Zero(arch.hidden);
        Vector c = Vector::Zero(arch.hidden);
        for (Index t = 0; t < steps; ++t) {
            const auto ut = static_cast<std::size_t>(t);
            CellStep step = lstm_cell(layer_input[ut], h, c, params, layer);
            h = step.h;
            c = step.c;
            layer_input[ut] = (masks && layer + 1 < arch.layers)
                                  ? Vector(h.cwiseProduct((*masks)[static_cast<std::size_t>(layer)][ut]))
                                  : h;
            if (cache) {
                cache->steps[static_cast<std::size_t>(layer)].push_back(std::move(step));
            }
        }
        h_top = h;
    }
    Vector activated = activate(h_top, arch.activation);
    Vector prediction = params.readout_weights() * activated + params.readout_bias();
    if (cache) {
        cache->readout_input = h_top;
        cache->activated = activated;
        cache->prediction = prediction;
    }
    return prediction;
}

double sample_loss(const Vector& prediction, const RowVector& target, double scale) {
    if (prediction.size() != target.size()) {
        throw Error(ErrorCode::ShapeMismatch, "prediction and target widths differ");
    }
    return scale * (prediction - target.transpose()).squaredNorm() / static_cast<double>(prediction.size());
}

GradientResult grad(const Matrix& sequence, const RowVector& target, const LstmParams& params, double loss_scale,
                    const DropoutMasks* masks) {
    LstmParams g(params.architecture());
    GradientResult result;
    result.loss = accumulate_grad(sequence, target, params, g, loss_scale, masks);
    result.gradient = std::move(g.flat());
    return result;
}

double accumulate_grad(const Matrix& sequence, const RowVector& target, const LstmParams& params, LstmParams& g,
                       double loss_scale, const DropoutMasks* masks) {
    const LstmArchitecture& arch = params.architecture();
    if (!(g.architecture() == arch)) {
        throw Error(ErrorCode::ShapeMismatch, "gradient buffer architecture differs from parameters");
    }
    ForwardCache cache;
    const Vector prediction = forward(sequence, params, &cache, masks);
    const double loss = sample_loss(prediction, target, loss_scale);

    // Loss layer and readout.
    const Vector d_pred =
        loss_scale * 2.0 * (prediction - target.transpose()) / static_cast<double>(arch.features);
    g.readout_weights().noalias() += d_pred * cache.activated.transpose();
    g.readout_bias() += d_pred;
    const Vector d_act = params.readout_weights().transpose() * d_pred;
    const Vector d_h_top = d_act.cwiseProduct(activate_derivative(cache.readout_input, arch.activation));

    const Index steps = sequence.rows();
    // Gradient flowing into each layer's h_t from above; the top layer only sees h_T.
    std::vector<Vector> d_h_above(static_cast<std::size_t>(steps), Vector::Zero(arch.hidden));
    d_h_above.back() = d_h_top;

    for (Index layer = arch.layers - 1; layer >= 0; --layer) {
        const auto& cells = cache.steps[static_cast<std::size_t>(layer)];
        const Index in_size = params.layer_input_size(layer);
        std::vector<Vector> d_x(static_cast<std::size_t>(steps), Vector::Zero(in_size));
        Vector d_h_next = Vector::Zero(arch.hidden);
        Vector d_c_next = Vector::Zero(arch.hidden);
        for (Index t = steps - 1; t >= 0; --t) {
            const auto ut = static_cast<std::size_t>(t);
            const CellStep& s = cells[ut];
            const Vector d_h = d_h_above[ut] + d_h_next;

            const Vector d_o = d_h.cwiseProduct(s.tanh_c);
            const Vector d_a_o = d_o.cwiseProduct(s.output_gate.cwiseProduct((1.0 - s.output_gate.array()).matrix()));
            const Vector d_c = d_c_next +
                               d_h.cwiseProduct(s.output_gate).cwiseProduct((1.0 - s.tanh_c.array().square()).matrix()) +
                               d_a_o.cwiseProduct(params.peephole(layer, Gate::Output));
            const Vector d_a_f = d_c.cwiseProduct(s.c_prev).cwiseProduct(
                s.forget_gate.cwiseProduct((1.0 - s.forget_gate.array()).matrix()));
            const Vector d_a_i = d_c.cwiseProduct(s.candidate).cwiseProduct(
                s.input_gate.cwiseProduct((1.0 - s.input_gate.array()).matrix()));
            const Vector d_a_c =
                d_c.cwiseProduct(s.input_gate).cwiseProduct((1.0 - s.candidate.array().square()).matrix());

            const std::array<const Vector*, 4> d_pre{&d_a_i, &d_a_f, &d_a_c, &d_a_o};
            Vector d_h_prev = Vector::Zero(arch.hidden);
            for (std::size_t k = 0; k < 4; ++k) {
                const Gate gate = kGates[k];
                g.input_weights(layer, gate).noalias() += *d_pre[k] * s.x.transpose();
                g.recurrent_weights(layer, gate).noalias() += *d_pre[k] * s.h_prev.transpose();
                g.bias(layer, gate) += *d_pre[k];
                d_x[ut].noalias() += params.input_weights(layer, gate).transpose() * *d_pre[k];
                d_h_prev.noalias() += params.recurrent_weights(layer, gate).transpose() * *d_pre[k];
            }
            g.peephole(layer, Gate::Input) += d_a_i.cwiseProduct(s.c_prev);
            g.peephole(layer, Gate::Forget) += d_a_f.cwiseProduct(s.c_prev);
            g.peephole(layer, Gate::Output) += d_a_o.cwiseProduct(s.c);

            d_c_next = d_c.cwiseProduct(s.forget_gate) + d_a_i.cwiseProduct(params.peephole(layer, Gate::Input)) +
                       d_a_f.cwiseProduct(params.peephole(layer, Gate::Forget));
            d_h_next = d_h_prev;
        }
        if (layer > 0) {
            for (Index t = 0; t < steps; ++t) {
                const auto ut = static_cast<std::size_t>(t);
                d_h_above[ut] = masks ? Vector(d_x[ut].cwiseProduct((*masks)[static_cast<std::size_t>(layer - 1)][ut]))
                                      : d_x[ut];
            }
        }
    }
    return loss;
}

}  // namespace blockband::forecaster
