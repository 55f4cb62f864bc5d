#include "blockband/pipeline/config.hpp"

#include "blockband/error.hpp"
#include "blockband/pipeline/toml_lite.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace blockband::pipeline {

namespace {

using nlohmann::json;

/// Reads typed keys out of one table and records every problem instead of stopping at the first.
class TableReader {
public:
    TableReader(const json& root, std::string table, std::vector<std::string>& errors)
        : table_(std::move(table)), errors_(errors) {
        if (auto it = root.find(table_); it != root.end()) {
            if (it->is_object()) {
                node_ = &*it;
            } else {
                errors_.push_back("'" + table_ + "' must be a table");
            }
        }
    }

    ~TableReader() {
        if (node_ == nullptr) return;
        for (const auto& [key, value] : node_->items()) {
            if (!seen_.contains(key)) {
                errors_.push_back("unknown key '" + table_ + "." + key + "'");
            }
        }
    }

    TableReader(const TableReader&) = delete;
    TableReader& operator=(const TableReader&) = delete;

    const json* find(const std::string& key) {
        seen_.insert(key);
        if (node_ == nullptr) return nullptr;
        auto it = node_->find(key);
        return it == node_->end() ? nullptr : &*it;
    }

    void integer(const std::string& key, Index& out, Index min_value) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) {
                bad(key, "must be an integer");
            } else if (v->get<Index>() < min_value) {
                bad(key, "must be >= " + std::to_string(min_value));
            } else {
                out = v->get<Index>();
            }
        }
    }

    void unsigned_integer(const std::string& key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
                bad(key, "must be a non-negative integer");
            } else {
                out = v->get<std::uint64_t>();
            }
        }
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) {
                bad(key, "must be a number");
            } else {
                out = v->get<double>();
            }
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) {
                bad(key, "must be a string");
            } else {
                out = v->get<std::string>();
            }
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) {
                bad(key, "must be true or false");
            } else {
                out = v->get<bool>();
            }
        }
    }

    template <typename Parse, typename T>
    void enumeration(const std::string& key, T& out, Parse parse) {
        if (const json* v = find(key)) {
            if (!v->is_string()) {
                bad(key, "must be a string");
                return;
            }
            try {
                out = parse(v->get<std::string>());
            } catch (const Error& e) {
                bad(key, e.detail());
            }
        }
    }

    void bad(const std::string& key, const std::string& what) { errors_.push_back(table_ + "." + key + " " + what); }

private:
    std::string table_;
    std::vector<std::string>& errors_;
    const json* node_ = nullptr;
    std::set<std::string> seen_;
};

[[noreturn]] void throw_errors(const std::vector<std::string>& errors) {
    std::string message = std::to_string(errors.size()) + " configuration problem(s):";
    for (const auto& e : errors) {
        message += "\n  - " + e;
    }
    throw Error(ErrorCode::BadConfig, message);
}

void collect_cross_field(const PipelineConfig& c, std::vector<std::string>& errors) {
    if (c.input.empty()) errors.push_back("data.input is required");
    const double sum = c.split.train + c.split.validation + c.split.test;
    if (!(c.split.train > 0 && c.split.validation > 0 && c.split.test > 0) || std::abs(sum - 1.0) > 1e-9) {
        errors.push_back("data.split must be three positive fractions summing to 1");
    }
    if (c.block_length && *c.block_length < 1) errors.push_back("bootstrap.block_length must be >= 1 or \"auto\"");
    if (!(c.lbb_locality > 0.0 && c.lbb_locality <= 1.0)) errors.push_back("bootstrap.lbb_locality must lie in (0, 1]");
    if (!(c.alpha > 0.0)) errors.push_back("blocklen.alpha must be positive");
    if (c.l_max != 0 && c.l_max < c.l_min) errors.push_back("blocklen.l_max must be >= blocklen.l_min");
    if (!(c.ridge >= 0.0)) errors.push_back("forecaster.ridge must be >= 0");
    if (!(c.level > 0.0 && c.level < 1.0)) errors.push_back("band.level must lie in (0, 1)");
    if (c.out.empty()) errors.push_back("run.out must not be empty");
    try {
        forecaster::validate(c.train);
    } catch (const Error& e) {
        errors.push_back("forecaster: " + e.detail());
    }
}

}  // namespace

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

PipelineConfig config_from_json(const nlohmann::json& doc) {
    std::vector<std::string> errors;
    PipelineConfig c;
    if (!doc.is_object()) {
        throw_errors({"configuration must be a table of tables"});
    }
    static const std::set<std::string> tables{"data", "window", "bootstrap", "blocklen", "forecaster", "band", "run"};
    for (const auto& [key, value] : doc.items()) {
        if (!tables.contains(key)) errors.push_back("unknown table or key '" + key + "'");
    }
    {
        TableReader t(doc, "data", errors);
        t.string("input", c.input);
        if (const json* v = t.find("features")) {
            if (!v->is_array() || !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_string(); })) {
                t.bad("features", "must be an array of strings");
            } else {
                c.features = v->get<std::vector<std::string>>();
            }
        }
        if (const json* v = t.find("split")) {
            if (!v->is_array() || v->size() != 3 ||
                !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_number(); })) {
                t.bad("split", "must be an array of three numbers");
            } else {
                c.split = {(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
            }
        }
    }
    {
        TableReader t(doc, "window", errors);
        t.integer("lookback", c.lookback, 1);
        t.integer("stride", c.stride, 1);
        t.integer("horizon", c.horizon, 1);
    }
    {
        TableReader t(doc, "bootstrap", errors);
        t.enumeration("scheme", c.scheme, [](const std::string& s) { return bootstrap::parse_variant(s); });
        if (const json* v = t.find("block_length")) {
            if (v->is_string() && v->get<std::string>() == "auto") {
                c.block_length.reset();
            } else if (v->is_number_integer() && v->get<Index>() >= 1) {
                c.block_length = v->get<Index>();
            } else {
                t.bad("block_length", "must be \"auto\" or a positive integer");
            }
        }
        t.integer("mbb_blocks", c.mbb_blocks, 0);
        t.number("lbb_locality", c.lbb_locality);
        t.integer("replicates", c.replicates, 1);
    }
    {
        TableReader t(doc, "blocklen", errors);
        t.number("alpha", c.alpha);
        t.integer("l_min", c.l_min, 1);
        t.integer("l_max", c.l_max, 0);
        t.integer("replicates", c.blocklen_replicates, 1);
    }
    {
        TableReader t(doc, "forecaster", errors);
        t.enumeration("kind", c.forecaster, [](const std::string& s) {
            if (s == "lstm") return ForecasterKind::Lstm;
            if (s == "baseline") return ForecasterKind::Baseline;
            throw Error(ErrorCode::BadConfig, "must be \"lstm\" or \"baseline\"");
        });
        t.number("ridge", c.ridge);
        t.integer("batch_size", c.train.batch_size, 1);
        t.integer("hidden_size", c.train.hidden_size, 1);
        t.integer("num_layers", c.train.num_layers, 1);
        t.number("learning_rate", c.train.learning_rate);
        t.number("dropout_rate", c.train.dropout_rate);
        t.enumeration("activation", c.train.activation,
                      [](const std::string& s) { return forecaster::parse_activation(s); });
        t.enumeration("optimizer", c.train.optimizer,
                      [](const std::string& s) { return forecaster::parse_optimizer(s); });
        t.integer("epochs", c.train.epochs, 1);
        t.integer("patience", c.train.patience, 1);
        t.integer("tune_budget", c.tune_budget, 0);
    }
    {
        TableReader t(doc, "band", errors);
        t.number("level", c.level);
    }
    {
        TableReader t(doc, "run", errors);
        t.unsigned_integer("seed", c.seed);
        t.integer("workers", c.workers, 1);
        t.string("out", c.out);
        t.boolean("cache", c.cache);
        t.boolean("save_models", c.save_models);
    }
    collect_cross_field(c, errors);
    if (!errors.empty()) {
        throw_errors(errors);
    }
    return c;
}

void validate(const PipelineConfig& config) {
    std::vector<std::string> errors;
    collect_cross_field(config, errors);
    if (!errors.empty()) {
        throw_errors(errors);
    }
}

PipelineConfig parse_config(std::string_view toml_text) {
    return config_from_json(parse_toml(toml_text));
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::BadConfig, "cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

nlohmann::json config_to_json(const PipelineConfig& c) {
    json j;
    j["data"] = {{"input", c.input},
                 {"features", c.features},
                 {"split", {c.split.train, c.split.validation, c.split.test}}};
    j["window"] = {{"lookback", c.lookback}, {"stride", c.stride}, {"horizon", c.horizon}};
    j["bootstrap"] = {{"scheme", std::string(bootstrap::variant_name(c.scheme))},
                      {"block_length", c.block_length ? json(*c.block_length) : json("auto")},
                      {"mbb_blocks", c.mbb_blocks},
                      {"lbb_locality", c.lbb_locality},
                      {"replicates", c.replicates}};
    j["blocklen"] = {{"alpha", c.alpha}, {"l_min", c.l_min}, {"l_max", c.l_max}, {"replicates", c.blocklen_replicates}};
    j["forecaster"] = {{"kind", c.forecaster == ForecasterKind::Lstm ? "lstm" : "baseline"},
                       {"ridge", c.ridge},
                       {"batch_size", c.train.batch_size},
                       {"hidden_size", c.train.hidden_size},
                       {"num_layers", c.train.num_layers},
                       {"learning_rate", c.train.learning_rate},
                       {"dropout_rate", c.train.dropout_rate},
                       {"activation", std::string(forecaster::activation_name(c.train.activation))},
                       {"optimizer", std::string(forecaster::optimizer_name(c.train.optimizer))},
                       {"epochs", c.train.epochs},
                       {"patience", c.train.patience},
                       {"tune_budget", c.tune_budget}};
    j["band"] = {{"level", c.level}};
    j["run"] = {{"seed", c.seed},
                {"workers", c.workers},
                {"out", c.out},
                {"cache", c.cache},
                {"save_models", c.save_models}};
    return j;
}

std::string config_to_toml(const PipelineConfig& config) {
    return dump_toml(config_to_json(config));
}

}  // namespace blockband::pipeline
