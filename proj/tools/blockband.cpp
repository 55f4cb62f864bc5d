#include "blockband/error.hpp"
#include "blockband/pipeline/commands.hpp"
#include "blockband/pipeline/config.hpp"
#include "blockband/pipeline/synthetic.hpp"
#include "blockband/pipeline/toml_lite.hpp"
#include "blockband/series/csv.hpp"
#include "blockband/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bb = blockband;
namespace bp = blockband::pipeline;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config_path;
    std::string input;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string block_length;
    std::optional<long long> replicates;
    std::string forecaster;
    std::string out;
    std::optional<int> workers;

    void attach(CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "TOML configuration file");
        cmd->add_option("--input", input, "Input CSV (overrides data.input)");
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--scheme", scheme, "nobb | mbb | lbb");
        cmd->add_option("--block-length", block_length, "auto or a positive integer");
        cmd->add_option("--replicates", replicates, "Bootstrap replicates");
        cmd->add_option("--forecaster", forecaster, "lstm | baseline");
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--workers", workers, "Concurrent replicates");
    }

    [[nodiscard]] bp::PipelineConfig resolve(const json* base = nullptr) const {
        json doc = json::object();
        if (base != nullptr) {
            doc = *base;
        } else if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw bb::Error(bb::ErrorCode::BadConfig, "cannot open config file '" + config_path + "'");
            }
            std::ostringstream text;
            text << in.rdbuf();
            doc = bp::parse_toml(text.str());
        }
        if (!input.empty()) doc["data"]["input"] = input;
        if (seed) doc["run"]["seed"] = *seed;
        if (!scheme.empty()) doc["bootstrap"]["scheme"] = scheme;
        if (!block_length.empty()) {
            if (block_length == "auto") {
                doc["bootstrap"]["block_length"] = "auto";
            } else {
                const auto value = bb::series::parse_double(block_length);
                if (value && *value == static_cast<double>(static_cast<long long>(*value))) {
                    doc["bootstrap"]["block_length"] = static_cast<long long>(*value);
                } else {
                    doc["bootstrap"]["block_length"] = block_length;  // rejected by validation
                }
            }
        }
        if (replicates) doc["bootstrap"]["replicates"] = *replicates;
        if (!forecaster.empty()) doc["forecaster"]["kind"] = forecaster;
        if (!out.empty()) doc["run"]["out"] = out;
        if (workers) doc["run"]["workers"] = *workers;
        return bp::config_from_json(doc);
    }
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-bootstrap confidence bands for multivariate forecasts"};
    app.set_version_flag("--version", std::string(bb::kVersion));
    app.require_subcommand(1);

    std::string ingest_path;
    std::string ingest_features;
    auto* ingest = app.add_subcommand("ingest", "Validate a CSV and print a summary");
    ingest->add_option("path", ingest_path, "CSV file")->required();
    ingest->add_option("--features", ingest_features, "Comma-separated feature columns");

    Overrides blocklen_opts;
    auto* blocklen = app.add_subcommand("select-block-length", "Write the block-length objective curve");
    blocklen_opts.attach(blocklen);

    Overrides bootstrap_opts;
    auto* boot = app.add_subcommand("bootstrap", "Write bootstrap samples with audit sidecars");
    bootstrap_opts.attach(boot);

    Overrides pipeline_opts;
    std::string replay;
    auto* pipe = app.add_subcommand("pipeline", "Run the full pipeline");
    pipeline_opts.attach(pipe);
    pipe->add_option("--replay", replay, "Re-run the configuration recorded in a manifest");

    std::string band_path;
    std::string metrics_out;
    auto* evaluate = app.add_subcommand("evaluate", "Recompute metrics from a band CSV");
    evaluate->add_option("band", band_path, "Band CSV")->required();
    evaluate->add_option("-o,--output", metrics_out, "Write metrics JSON here instead of stdout");

    bp::SyntheticAr1 synth_spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic AR(1) series as CSV");
    synth->add_option("output", synth_out, "CSV path")->required();
    synth->add_option("--length", synth_spec.length, "Rows (default 400)");
    synth->add_option("--features", synth_spec.features, "Feature columns (default 3)");
    synth->add_option("--phi", synth_spec.phi, "Autoregressive coefficient (default 0.8)");
    synth->add_option("--seed", synth_spec.seed, "Generator seed (default 7)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest) {
            (void)bp::cmd_ingest(ingest_path, split_list(ingest_features), std::cout);
        } else if (*blocklen) {
            (void)bp::cmd_select_block_length(blocklen_opts.resolve(), std::cout);
        } else if (*boot) {
            (void)bp::cmd_bootstrap(bootstrap_opts.resolve(), std::cout);
        } else if (*pipe) {
            bp::PipelineConfig config;
            if (!replay.empty()) {
                const json recorded = bp::config_to_json(bp::config_from_manifest(replay));
                config = pipeline_opts.resolve(&recorded);
            } else {
                config = pipeline_opts.resolve();
            }
            (void)bp::cmd_pipeline(config, std::cout);
        } else if (*evaluate) {
            const std::string text = bp::dump_json(bp::cmd_evaluate(band_path));
            if (metrics_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream(metrics_out) << text;
            }
        } else if (*synth) {
            std::ofstream out(synth_out);
            if (!out) {
                throw bb::Error(bb::ErrorCode::BadConfig, "cannot write " + synth_out);
            }
            bb::series::write_series_csv(out, bp::synthetic_ar1(synth_spec));
        }
    } catch (const bb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bb::exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
