#include "blockband/forecaster/training.hpp"

#include "blockband/error.hpp"
#include "blockband/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace blockband::forecaster {

namespace {

LstmArchitecture architecture_for(const TrainConfig& config, Index features) {
    return {features, config.hidden_size, config.num_layers, config.activation};
}

template <typename T>
const T& pick(const std::vector<T>& options, Rng& rng, const char* name) {
    if (options.empty()) {
        throw Error(ErrorCode::BadConfig, std::string("search space for ") + name + " is empty");
    }
    return options[static_cast<std::size_t>(rng.uniform_index(options.size()))];
}

}  // namespace

void validate(const TrainConfig& c) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::BadConfig, "train config: " + what); };
    if (c.batch_size < 1) fail("batch_size must be >= 1");
    if (c.hidden_size < 1) fail("hidden_size must be >= 1");
    if (c.num_layers < 1) fail("num_layers must be >= 1");
    if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate)) fail("learning_rate must be finite and >= 0");
    if (!(c.dropout_rate >= 0.0 && c.dropout_rate < 1.0)) fail("dropout_rate must lie in [0, 1)");
    if (c.epochs < 1) fail("epochs must be >= 1");
    if (c.patience < 1) fail("patience must be >= 1");
}

double TrainHistory::best_validation_loss() const {
    const auto& losses = validation_loss.empty() ? train_loss : validation_loss;
    if (losses.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    return losses[static_cast<std::size_t>(best_epoch)];
}

double dataset_loss(const LstmParams& params, const SupervisedWindows& data) {
    if (data.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double total = 0.0;
    for (Index s = 0; s < data.size(); ++s) {
        total += sample_loss(forward(data.inputs[static_cast<std::size_t>(s)], params), data.targets.row(s));
    }
    return total / static_cast<double>(data.size());
}

FitResult fit(const SupervisedWindows& train, const SupervisedWindows& validation, const TrainConfig& config,
              std::uint64_t seed) {
    validate(config);
    if (train.empty()) {
        throw Error(ErrorCode::SeriesTooShort, "training set is empty");
    }
    Rng init_rng(mix_seed(seed));
    LstmParams params = LstmParams::random(architecture_for(config, train.targets.cols()), init_rng);
    return fit_from(std::move(params), train, validation, config, seed);
}

FitResult fit_from(LstmParams initial, const SupervisedWindows& train, const SupervisedWindows& validation,
                   const TrainConfig& config, std::uint64_t seed) {
    validate(config);
    if (train.empty()) {
        throw Error(ErrorCode::SeriesTooShort, "training set is empty");
    }
    const LstmArchitecture arch = initial.architecture();
    if (arch.features != train.targets.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "parameter feature count differs from training data");
    }

    Rng rng(seed);
    LstmParams params = std::move(initial);
    auto optimizer = make_optimizer(config.optimizer, config.learning_rate, params.size());
    const Index readout_first = params.readout_range().first;
    const bool use_dropout = config.dropout_rate > 0.0 && arch.layers > 1;

    FitResult result{params, {}};
    double best = std::numeric_limits<double>::infinity();
    Index stale = 0;

    std::vector<Index> order(static_cast<std::size_t>(train.size()));
    std::iota(order.begin(), order.end(), Index{0});
    LstmParams batch_grad(arch);

    for (Index epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t k = order.size(); k > 1; --k) {
            std::swap(order[k - 1], order[static_cast<std::size_t>(rng.uniform_index(k))]);
        }
        double epoch_loss = 0.0;
        for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t last = std::min(order.size(), first + static_cast<std::size_t>(config.batch_size));
            batch_grad.flat().setZero();
            for (std::size_t k = first; k < last; ++k) {
                const Index s = order[k];
                const Matrix& input = train.inputs[static_cast<std::size_t>(s)];
                if (use_dropout) {
                    const DropoutMasks masks = sample_dropout_masks(arch, input.rows(), config.dropout_rate, rng);
                    epoch_loss += accumulate_grad(input, train.targets.row(s), params, batch_grad, 1.0, &masks);
                } else {
                    epoch_loss += accumulate_grad(input, train.targets.row(s), params, batch_grad);
                }
            }
            Vector& g = batch_grad.flat();
            g /= static_cast<double>(last - first);
            if (config.readout_only) {
                g.head(readout_first).setZero();
            }
            if (!g.allFinite()) {
                throw Error(ErrorCode::DivergedLoss, "non-finite gradient in epoch " + std::to_string(epoch + 1));
            }
            optimizer->step(params.flat(), g);
        }
        epoch_loss /= static_cast<double>(train.size());
        if (!std::isfinite(epoch_loss)) {
            throw Error(ErrorCode::DivergedLoss, "training loss became non-finite in epoch " + std::to_string(epoch + 1));
        }
        result.history.train_loss.push_back(epoch_loss);

        double monitored = epoch_loss;
        if (!validation.empty()) {
            monitored = dataset_loss(params, validation);
            if (!std::isfinite(monitored)) {
                throw Error(ErrorCode::DivergedLoss,
                            "validation loss became non-finite in epoch " + std::to_string(epoch + 1));
            }
            result.history.validation_loss.push_back(monitored);
        }
        if (monitored < best) {
            best = monitored;
            result.params = params;
            result.history.best_epoch = epoch;
            stale = 0;
        } else if (++stale >= config.patience) {
            break;
        }
    }
    return result;
}

TrainConfig sample_config(const SearchSpace& space, const TrainConfig& base, Rng& rng) {
    TrainConfig config = base;
    config.batch_size = pick(space.batch_sizes, rng, "batch_size");
    config.hidden_size = pick(space.hidden_sizes, rng, "hidden_size");
    config.num_layers = pick(space.layer_counts, rng, "num_layers");
    config.learning_rate = pick(space.learning_rates, rng, "learning_rate");
    config.dropout_rate = pick(space.dropout_rates, rng, "dropout_rate");
    config.activation = pick(space.activations, rng, "activation");
    config.optimizer = pick(space.optimizers, rng, "optimizer");
    return config;
}

TuneResult tune(const SupervisedWindows& train, const SupervisedWindows& validation, const SearchSpace& space,
                Index budget, const TrainConfig& base, std::uint64_t seed) {
    if (budget < 1) {
        throw Error(ErrorCode::BadConfig, "tuning budget must be at least 1");
    }
    Rng rng(seed);
    TuneResult result;
    double best = std::numeric_limits<double>::infinity();
    for (Index b = 0; b < budget; ++b) {
        TrainConfig config = sample_config(space, base, rng);
        config.seed = derive_seed(seed, 1, static_cast<std::uint64_t>(b));
        const FitResult fitted = fit(train, validation, config, config.seed);
        const double loss = fitted.history.best_validation_loss();
        result.trials.push_back({config, loss});
        if (b == 0 || loss < best) {
            best = loss;
            result.best = config;
        }
    }
    return result;
}

}  // namespace blockband::forecaster
