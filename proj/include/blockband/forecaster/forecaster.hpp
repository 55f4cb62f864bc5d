#pragma once

#include "blockband/forecaster/lstm.hpp"
#include "blockband/forecaster/ridge.hpp"
#include "blockband/forecaster/training.hpp"
#include "blockband/series/transforms.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string_view>

namespace blockband::forecaster {

/// A fitted one-step-ahead model. Immutable; safe to share across threads.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    [[nodiscard]] virtual std::string_view kind() const noexcept = 0;
    /// Next row after a T x n_f window.
    [[nodiscard]] virtual RowVector predict(const Matrix& window) const = 0;
    /// Model-specific parameter block of a checkpoint.
    [[nodiscard]] virtual nlohmann::json parameters_json() const = 0;
};

class LstmForecaster final : public Forecaster {
public:
    LstmForecaster(LstmParams params, TrainConfig config) : params_(std::move(params)), config_(config) {}

    [[nodiscard]] std::string_view kind() const noexcept override { return "lstm"; }
    [[nodiscard]] RowVector predict(const Matrix& window) const override;
    [[nodiscard]] nlohmann::json parameters_json() const override;

    [[nodiscard]] const LstmParams& params() const noexcept { return params_; }
    [[nodiscard]] const TrainConfig& config() const noexcept { return config_; }

private:
    LstmParams params_;
    TrainConfig config_;
};

class RidgeForecaster final : public Forecaster {
public:
    explicit RidgeForecaster(RidgeModel model) : model_(std::move(model)) {}

    [[nodiscard]] std::string_view kind() const noexcept override { return "baseline"; }
    [[nodiscard]] RowVector predict(const Matrix& window) const override { return model_.predict(window); }
    [[nodiscard]] nlohmann::json parameters_json() const override;

    [[nodiscard]] const RidgeModel& model() const noexcept { return model_; }

private:
    RidgeModel model_;
};

/// Rolls `model` forward `horizon` steps from `history` (at least T rows), feeding
/// each prediction back as input. Returns the horizon x n_f predicted rows.
[[nodiscard]] Matrix roll_forward(const Forecaster& model, const Matrix& history, Index lookback, Index horizon);

// -- checkpoints --

inline constexpr std::string_view kCheckpointFormat = "blockband-forecaster";
inline constexpr int kCheckpointVersion = 1;

/**
 * Versioned JSON checkpoint: {format, version, kind, ...model fields, scale}.
 * Doubles are written in shortest round-trip form, so a loaded model predicts
 * bit-identically.
 */
[[nodiscard]] nlohmann::json save_checkpoint(const Forecaster& model,
                                             const std::optional<series::ScaleParams>& scale = std::nullopt);

struct LoadedCheckpoint {
    std::unique_ptr<Forecaster> model;
    std::optional<series::ScaleParams> scale;
};

/// @throws Error(ParseError) on an unknown format, version or kind.
[[nodiscard]] LoadedCheckpoint load_checkpoint(const nlohmann::json& checkpoint);

[[nodiscard]] nlohmann::json train_config_to_json(const TrainConfig& config);
[[nodiscard]] TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace blockband::forecaster
