#include "blockband/forecaster/forecaster.hpp"

#include "blockband/error.hpp"

#include <string>

namespace blockband::forecaster {

namespace {

nlohmann::json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json row_json(const RowVector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

RowVector row_from_json(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const RowVector>(values.data(), static_cast<Index>(values.size()));
}

[[noreturn]] void bad_checkpoint(const std::string& what) {
    throw Error(ErrorCode::ParseError, "checkpoint: " + what);
}

}  // namespace

RowVector LstmForecaster::predict(const Matrix& window) const {
    return forward(window, params_).transpose();
}

nlohmann::json LstmForecaster::parameters_json() const {
    const LstmArchitecture& arch = params_.architecture();
    nlohmann::json j;
    j["architecture"] = {{"features", arch.features},
                         {"hidden", arch.hidden},
                         {"layers", arch.layers},
                         {"activation", std::string(activation_name(arch.activation))}};
    j["train_config"] = train_config_to_json(config_);
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto& slot : params_.tensors()) {
        tensors.push_back({{"name", slot.name},
                           {"rows", slot.rows},
                           {"cols", slot.cols},
                           {"data", vector_json(params_.flat().segment(slot.offset, slot.rows * slot.cols))}});
    }
    j["tensors"] = std::move(tensors);
    return j;
}

nlohmann::json RidgeForecaster::parameters_json() const {
    nlohmann::json j;
    j["lookback"] = model_.lookback;
    j["ridge"] = model_.ridge;
    j["coefficients"] = {{"rows", model_.coefficients.rows()},
                         {"cols", model_.coefficients.cols()},
                         {"data", std::vector<double>(model_.coefficients.data(),
                                                      model_.coefficients.data() + model_.coefficients.size())}};
    j["intercept"] = row_json(model_.intercept);
    return j;
}

Matrix roll_forward(const Forecaster& model, const Matrix& history, Index lookback, Index horizon) {
    if (lookback < 1 || horizon < 1 || history.rows() < lookback) {
        throw Error(ErrorCode::SeriesTooShort, "roll_forward needs at least look-back rows and a positive horizon");
    }
    Matrix window = history.bottomRows(lookback);
    Matrix out(horizon, history.cols());
    for (Index h = 0; h < horizon; ++h) {
        out.row(h) = model.predict(window);
        if (h + 1 < horizon) {
            if (lookback > 1) {
                window.topRows(lookback - 1) = window.bottomRows(lookback - 1).eval();
            }
            window.row(lookback - 1) = out.row(h);
        }
    }
    return out;
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
    return {{"batch_size", c.batch_size},
            {"hidden_size", c.hidden_size},
            {"num_layers", c.num_layers},
            {"learning_rate", c.learning_rate},
            {"dropout_rate", c.dropout_rate},
            {"activation", std::string(activation_name(c.activation))},
            {"optimizer", std::string(optimizer_name(c.optimizer))},
            {"epochs", c.epochs},
            {"patience", c.patience},
            {"seed", c.seed},
            {"readout_only", c.readout_only}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.batch_size = j.at("batch_size").get<Index>();
    c.hidden_size = j.at("hidden_size").get<Index>();
    c.num_layers = j.at("num_layers").get<Index>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.dropout_rate = j.at("dropout_rate").get<double>();
    c.activation = parse_activation(j.at("activation").get<std::string>());
    c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
    c.epochs = j.at("epochs").get<Index>();
    c.patience = j.at("patience").get<Index>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.readout_only = j.value("readout_only", false);
    return c;
}

nlohmann::json save_checkpoint(const Forecaster& model, const std::optional<series::ScaleParams>& scale) {
    nlohmann::json j;
    j["format"] = std::string(kCheckpointFormat);
    j["version"] = kCheckpointVersion;
    j["kind"] = std::string(model.kind());
    j["model"] = model.parameters_json();
    if (scale) {
        j["scale"] = {{"min", row_json(scale->min)}, {"max", row_json(scale->max)}};
    }
    return j;
}

LoadedCheckpoint load_checkpoint(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != kCheckpointFormat) {
            bad_checkpoint("unknown format");
        }
        if (j.at("version").get<int>() != kCheckpointVersion) {
            bad_checkpoint("unsupported version " + j.at("version").dump());
        }
        LoadedCheckpoint out;
        const std::string kind = j.at("kind").get<std::string>();
        const nlohmann::json& m = j.at("model");
        if (kind == "lstm") {
            const auto& a = m.at("architecture");
            const LstmArchitecture arch{a.at("features").get<Index>(), a.at("hidden").get<Index>(),
                                        a.at("layers").get<Index>(),
                                        parse_activation(a.at("activation").get<std::string>())};
            LstmParams params(arch);
            const auto& tensors = m.at("tensors");
            if (tensors.size() != params.tensors().size()) {
                bad_checkpoint("tensor count mismatch");
            }
            for (std::size_t k = 0; k < tensors.size(); ++k) {
                const TensorSlot& slot = params.tensors()[k];
                const auto& t = tensors[k];
                const auto data = t.at("data").get<std::vector<double>>();
                if (t.at("name").get<std::string>() != slot.name || t.at("rows").get<Index>() != slot.rows ||
                    t.at("cols").get<Index>() != slot.cols ||
                    static_cast<Index>(data.size()) != slot.rows * slot.cols) {
                    bad_checkpoint("tensor '" + slot.name + "' has an unexpected name or shape");
                }
                params.flat().segment(slot.offset, slot.rows * slot.cols) =
                    Eigen::Map<const Vector>(data.data(), static_cast<Index>(data.size()));
            }
            out.model = std::make_unique<LstmForecaster>(std::move(params), train_config_from_json(m.at("train_config")));
        } else if (kind == "baseline") {
            RidgeModel model;
            model.lookback = m.at("lookback").get<Index>();
            model.ridge = m.at("ridge").get<double>();
            const auto& c = m.at("coefficients");
            const auto rows = c.at("rows").get<Index>();
            const auto cols = c.at("cols").get<Index>();
            const auto data = c.at("data").get<std::vector<double>>();
            if (static_cast<Index>(data.size()) != rows * cols) {
                bad_checkpoint("coefficient data size mismatch");
            }
            model.coefficients = Eigen::Map<const Matrix>(data.data(), rows, cols);
            model.intercept = row_from_json(m.at("intercept"));
            out.model = std::make_unique<RidgeForecaster>(std::move(model));
        } else {
            bad_checkpoint("unknown model kind '" + kind + "'");
        }
        if (auto it = j.find("scale"); it != j.end()) {
            out.scale = series::ScaleParams{row_from_json(it->at("min")), row_from_json(it->at("max"))};
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        bad_checkpoint(e.what());
    }
}

}  // namespace blockband::forecaster
