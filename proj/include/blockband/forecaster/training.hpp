#pragma once

#include "blockband/forecaster/lstm.hpp"
#include "blockband/forecaster/optimizer.hpp"
#include "blockband/forecaster/supervised.hpp"

#include <cstdint>
#include <vector>

namespace blockband::forecaster {

struct TrainConfig {
    Index batch_size = 32;
    Index hidden_size = 16;
    Index num_layers = 1;
    double learning_rate = 0.001;
    double dropout_rate = 0.1;
    Activation activation = Activation::Tanh;
    OptimizerKind optimizer = OptimizerKind::Adam;
    Index epochs = 50;
    Index patience = 5;
    std::uint64_t seed = 0;
    /// Freeze everything but the readout layer.
    bool readout_only = false;
};

/// Throws Error(BadConfig) listing the first invalid field.
void validate(const TrainConfig& config);

struct TrainHistory {
    std::vector<double> train_loss;       // mean sample loss seen during each epoch
    std::vector<double> validation_loss;  // full-pass loss after each epoch (empty without validation data)
    Index best_epoch = 0;                 // 0-based epoch whose parameters were kept
    [[nodiscard]] double best_validation_loss() const;
};

struct FitResult {
    LstmParams params;
    TrainHistory history;
};

/// Mean sample_loss over a dataset, no dropout.
[[nodiscard]] double dataset_loss(const LstmParams& params, const SupervisedWindows& data);

/**
 * Mini-batch training with early stopping on `validation` (or on the training
 * loss when `validation` is empty). The parameters of the best epoch are kept.
 * Fully determined by (data, config, seed).
 * @throws Error(DivergedLoss) when a loss becomes non-finite.
 */
[[nodiscard]] FitResult fit(const SupervisedWindows& train, const SupervisedWindows& validation,
                            const TrainConfig& config, std::uint64_t seed);

/// Same, starting from given parameters instead of a random initialisation.
[[nodiscard]] FitResult fit_from(LstmParams initial, const SupervisedWindows& train,
                                 const SupervisedWindows& validation, const TrainConfig& config, std::uint64_t seed);

/// Categorical hyper-parameter domain; defaults are the published search space.
struct SearchSpace {
    std::vector<Index> batch_sizes{8, 16, 32, 64};
    std::vector<Index> hidden_sizes{16, 32, 64, 128};
    std::vector<Index> layer_counts{1, 2, 3, 4};
    std::vector<double> learning_rates{0.0001, 0.001, 0.01};
    std::vector<double> dropout_rates{0.1, 0.2, 0.3, 0.4};
    std::vector<Activation> activations{Activation::Relu, Activation::Silu, Activation::Sigmoid, Activation::Tanh};
    std::vector<OptimizerKind> optimizers{OptimizerKind::Adam, OptimizerKind::RMSprop, OptimizerKind::SGD,
                                          OptimizerKind::Adagrad, OptimizerKind::Adamax};
};

struct Trial {
    TrainConfig config;
    double validation_loss = 0.0;
};

struct TuneResult {
    TrainConfig best;
    std::vector<Trial> trials;  // in sampling order
};

/// Draws one configuration; epochs, patience and readout_only come from `base`.
[[nodiscard]] TrainConfig sample_config(const SearchSpace& space, const TrainConfig& base, Rng& rng);

/**
 * Random search: `budget` configurations sampled from `space`, each trained
 * with fit(); returns the lowest validation loss, ties to the earlier sample.
 */
[[nodiscard]] TuneResult tune(const SupervisedWindows& train, const SupervisedWindows& validation,
                              const SearchSpace& space, Index budget, const TrainConfig& base, std::uint64_t seed);

}  // namespace blockband::forecaster
