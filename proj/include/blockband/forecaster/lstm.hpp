#pragma once

#include "blockband/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blockband {
class Rng;
}

namespace blockband::forecaster {

enum class Gate { Input = 0, Forget = 1, Cell = 2, Output = 3 };

/// Applied to the top layer's final hidden state before the affine readout.
enum class Activation { Relu, Silu, Sigmoid, Tanh };

[[nodiscard]] std::string_view activation_name(Activation a) noexcept;
[[nodiscard]] Activation parse_activation(std::string_view text);

struct LstmArchitecture {
    Index features = 1;
    Index hidden = 16;
    Index layers = 1;
    Activation activation = Activation::Tanh;

    friend bool operator==(const LstmArchitecture&, const LstmArchitecture&) = default;
};

/// Name, offset and shape of one parameter tensor inside the flat buffer.
struct TensorSlot {
    std::string name;
    Index offset = 0;
    Index rows = 0;
    Index cols = 0;
};

/**
 * @brief All weights of a stacked peephole LSTM plus its readout, in one flat buffer.
 *
 * Per layer: input weights (hidden x in) and recurrent weights (hidden x hidden)
 * for the input, forget, cell and output gates; diagonal peephole vectors for
 * the input, forget and output gates; one bias per gate. The readout maps the
 * activated final hidden state to n_f outputs. Matrices are column-major views.
 */
class LstmParams {
public:
    using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
    using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
    using VectorMap = Eigen::Map<Eigen::VectorXd>;
    using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

    LstmParams() = default;
    explicit LstmParams(const LstmArchitecture& arch);

    /// Uniform(-1/sqrt(hidden), 1/sqrt(hidden)) weights, zero biases except forget bias 1.
    static LstmParams random(const LstmArchitecture& arch, Rng& rng);

    [[nodiscard]] const LstmArchitecture& architecture() const noexcept { return arch_; }
    [[nodiscard]] Index layer_input_size(Index layer) const noexcept { return layer == 0 ? arch_.features : arch_.hidden; }

    MatrixMap input_weights(Index layer, Gate gate);
    MatrixMap recurrent_weights(Index layer, Gate gate);
    /// Gate::Cell has no peephole.
    VectorMap peephole(Index layer, Gate gate);
    VectorMap bias(Index layer, Gate gate);
    MatrixMap readout_weights();
    VectorMap readout_bias();

    [[nodiscard]] ConstMatrixMap input_weights(Index layer, Gate gate) const;
    [[nodiscard]] ConstMatrixMap recurrent_weights(Index layer, Gate gate) const;
    [[nodiscard]] ConstVectorMap peephole(Index layer, Gate gate) const;
    [[nodiscard]] ConstVectorMap bias(Index layer, Gate gate) const;
    [[nodiscard]] ConstMatrixMap readout_weights() const;
    [[nodiscard]] ConstVectorMap readout_bias() const;

    [[nodiscard]] Vector& flat() noexcept { return data_; }
    [[nodiscard]] const Vector& flat() const noexcept { return data_; }
    [[nodiscard]] const std::vector<TensorSlot>& tensors() const noexcept { return slots_; }
    [[nodiscard]] Index size() const noexcept { return data_.size(); }

    /// Offset range [first, last) of the readout tensors within flat().
    [[nodiscard]] std::pair<Index, Index> readout_range() const noexcept;

private:
    MatrixMap matrix_view(std::size_t index);
    [[nodiscard]] ConstMatrixMap matrix_view(std::size_t index) const;
    VectorMap vector_view(std::size_t index);
    [[nodiscard]] ConstVectorMap vector_view(std::size_t index) const;
    [[nodiscard]] std::size_t slot_index(Index layer, int kind, int gate) const;

    LstmArchitecture arch_;
    Vector data_;
    std::vector<TensorSlot> slots_;
};

/// Activations of one cell step.
struct CellStep {
    Vector x;
    Vector h_prev;
    Vector c_prev;
    Vector input_gate;
    Vector forget_gate;
    Vector candidate;  // tanh(W_xc x + W_hc h + b_c)
    Vector output_gate;
    Vector c;
    Vector tanh_c;
    Vector h;
};

/// One peephole LSTM step of layer `layer`. @throws Error(ShapeMismatch).
[[nodiscard]] CellStep lstm_cell(const Vector& x, const Vector& h_prev, const Vector& c_prev, const LstmParams& params,
                                 Index layer = 0);

/// Inverted-dropout masks on the outputs of every layer but the last: masks[layer][step].
using DropoutMasks = std::vector<std::vector<Vector>>;

[[nodiscard]] DropoutMasks sample_dropout_masks(const LstmArchitecture& arch, Index steps, double rate, Rng& rng);

struct ForwardCache {
    std::vector<std::vector<CellStep>> steps;  // [layer][t]
    Vector readout_input;                      // h_T of the top layer
    Vector activated;                          // activation(h_T)
    Vector prediction;
};

/// Unrolls the stack over `sequence` (T x n_f) from zero state and applies the readout.
[[nodiscard]] Vector forward(const Matrix& sequence, const LstmParams& params, ForwardCache* cache = nullptr,
                             const DropoutMasks* masks = nullptr);

/// Squared-error loss scale * mean_j (prediction_j - target_j)^2.
[[nodiscard]] double sample_loss(const Vector& prediction, const RowVector& target, double scale = 1.0);

struct GradientResult {
    double loss = 0.0;
    Vector gradient;  // same layout as LstmParams::flat()
};

/// Adds the gradient of sample_loss for one sample into `into` (same architecture) and returns the loss.
double accumulate_grad(const Matrix& sequence, const RowVector& target, const LstmParams& params, LstmParams& into,
                       double loss_scale = 1.0, const DropoutMasks* masks = nullptr);

/// Exact gradient of sample_loss by backpropagation through time, peephole paths included.
[[nodiscard]] GradientResult grad(const Matrix& sequence, const RowVector& target, const LstmParams& params,
                                  double loss_scale = 1.0, const DropoutMasks* masks = nullptr);

}  // namespace blockband::forecaster
