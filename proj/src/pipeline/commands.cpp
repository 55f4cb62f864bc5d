#include "blockband/pipeline/commands.hpp"

#include "blockband/band/band_io.hpp"
#include "blockband/bootstrap/sample_io.hpp"
#include "blockband/error.hpp"
#include "blockband/pipeline/output.hpp"
#include "blockband/rng.hpp"
#include "blockband/series/csv.hpp"
#include "blockband/series/transforms.hpp"
#include "blockband/version.hpp"

#include <fstream>
#include <sstream>

namespace blockband::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

series::MultiSeries load_input(const PipelineConfig& config) {
    return series::read_series_csv(fs::path(config.input), config.features);
}

std::string band_csv(const band::ConfidenceBand& b) {
    std::ostringstream out;
    band::write_band_csv(out, b);
    return out.str();
}

Matrix training_ratios(const series::MultiSeries& raw, const PipelineConfig& config) {
    const auto sizes = series::split_sizes(raw.length(), config.split);
    return series::log_ratio(raw.slice(0, sizes.train)).values;
}

}  // namespace

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

IngestSummary summarize(const series::MultiSeries& s) {
    IngestSummary summary;
    summary.rows = s.length();
    summary.features = s.feature_names();
    if (s.length() > 0) {
        summary.first_date = series::format_iso_date(s.timestamps().front());
        summary.last_date = series::format_iso_date(s.timestamps().back());
    }
    for (Index j = 0; j < s.num_features(); ++j) {
        summary.min.push_back(s.values().col(j).minCoeff());
        summary.max.push_back(s.values().col(j).maxCoeff());
    }
    return summary;
}

void print_summary(std::ostream& out, const IngestSummary& s) {
    out << "n=" << s.rows << "\n";
    out << "range=" << s.first_date << ".." << s.last_date << "\n";
    for (std::size_t j = 0; j < s.features.size(); ++j) {
        out << s.features[j] << " min=" << series::format_double(s.min[j])
            << " max=" << series::format_double(s.max[j]) << "\n";
    }
}

IngestSummary cmd_ingest(const fs::path& path, const std::vector<std::string>& features, std::ostream& out) {
    const auto summary = summarize(series::read_series_csv(path, features));
    print_summary(out, summary);
    return summary;
}

std::string curve_csv(const blocklen::ObjectiveCurve& curve) {
    std::ostringstream out;
    out << "l,distance,penalty,total\n";
    for (const auto& p : curve.points) {
        out << p.l << ',' << series::format_double(p.distance) << ',' << series::format_double(p.penalty) << ','
            << series::format_double(p.total) << '\n';
    }
    return out.str();
}

json curve_summary(const blocklen::ObjectiveCurve& curve, const PipelineConfig& config) {
    json j;
    j["best_l"] = curve.best_l;
    j["n_star"] = curve.n_star;
    j["l_max"] = curve.l_max;
    j["seed"] = config.seed;
    j["generator"] = std::string(Rng::generator_name);
    j["config"] = {{"variant", std::string(bootstrap::variant_name(config.scheme))},
                   {"lookback", config.lookback},
                   {"stride", config.stride},
                   {"alpha", config.alpha},
                   {"l_min", config.l_min},
                   {"l_max", config.l_max},
                   {"replicates", config.blocklen_replicates},
                   {"lbb_locality", curve.lbb_locality}};
    return j;
}

blocklen::ObjectiveCurve cmd_select_block_length(const PipelineConfig& config, std::ostream& log) {
    validate(config);
    const auto raw = load_input(config);
    const Matrix rows = training_ratios(raw, config);
    auto curve = blocklen::select_block_length(rows, blocklen_config(config));
    StagedOutput out(config.out);
    out.add("blocklen_curve.csv", curve_csv(curve));
    out.add("blocklen.json", dump_json(curve_summary(curve, config)));
    out.commit();
    log << "l*=" << curve.best_l << " (n*=" << curve.n_star << ", l_max=" << curve.l_max << ")\n";
    return curve;
}

bootstrap::BlockScheme cmd_bootstrap(const PipelineConfig& config, std::ostream& log) {
    validate(config);
    const auto raw = load_input(config);
    const Matrix rows = training_ratios(raw, config);
    StagedOutput out(config.out);
    Index l = 0;
    if (config.block_length) {
        l = *config.block_length;
    } else {
        const auto curve = blocklen::select_block_length(rows, blocklen_config(config));
        out.add("blocklen_curve.csv", curve_csv(curve));
        out.add("blocklen.json", dump_json(curve_summary(curve, config)));
        l = curve.best_l;
    }
    const auto scheme = resolve_scheme(config, l, rows.rows());
    for (Index r = 0; r < config.replicates; ++r) {
        const auto sample = bootstrap::resample(rows, scheme, bootstrap_seed(config.seed, static_cast<std::uint64_t>(r)));
        std::ostringstream csv;
        bootstrap::write_sample_csv(csv, sample, raw.feature_names());
        const std::string stem = "samples/sample_" + std::to_string(r);
        out.add(stem + ".csv", csv.str());
        out.add(stem + ".json", dump_json(bootstrap::sample_sidecar(sample)));
    }
    out.commit();
    log << config.replicates << " samples, " << bootstrap::variant_name(scheme.variant) << " l=" << l << "\n";
    return scheme;
}

json cmd_pipeline(const PipelineConfig& config, std::ostream& log) {
    validate(config);
    const fs::path out_dir(config.out);
    const auto raw = load_input(config);
    const std::string input_sha = sha256_file(config.input);

    std::optional<fs::path> cache;
    if (config.cache) {
        cache = out_dir / "cache";
    }
    const PipelineRun run = run_pipeline(raw, config, cache);

    StagedOutput out(out_dir);
    json outputs = json::object();
    outputs["band.csv"] = out.add("band.csv", band_csv(run.band));
    outputs["metrics.json"] = out.add("metrics.json", dump_json(band::metrics_json(run.metrics)));
    if (run.curve) {
        outputs["blocklen_curve.csv"] = out.add("blocklen_curve.csv", curve_csv(*run.curve));
        outputs["blocklen.json"] = out.add("blocklen.json", dump_json(curve_summary(*run.curve, config)));
    }
    if (config.save_models) {
        for (std::size_t r = 0; r < run.replicates.size(); ++r) {
            const std::string name = "models/replicate_" + std::to_string(r) + ".json";
            outputs[name] = out.add(name, dump_json(run.replicates[r].checkpoint));
        }
    }

    json m;
    m["software"] = {{"name", "blockband"}, {"version", std::string(kVersion)}};
    m["generator"] = std::string(Rng::generator_name);
    m["seed_derivation"] = {{"master", config.seed},
                            {"bootstrap", "master + r"},
                            {"forecaster", "splitmix64(splitmix64(master ^ 0x6c73746d) + r)"},
                            {"block_length", "splitmix64 chain over (master, stream 0, l, replicate)"},
                            {"tuning", "splitmix64 chain over (master, stream 2, 0), then (seed, stream 1, trial)"}};
    m["config"] = config_to_json(config);
    m["config_toml"] = config_to_toml(config);
    m["input"] = {{"path", config.input},
                  {"sha256", input_sha},
                  {"series_sha256", run.data_digest},
                  {"rows", raw.length()},
                  {"features", raw.feature_names()}};
    m["split"] = {{"train", run.data.sizes.train},
                  {"validation", run.data.sizes.validation},
                  {"test", run.data.sizes.test}};
    m["block_length"] = {{"value", run.block_length}, {"source", run.curve ? "auto" : "config"}};
    m["scheme"] = bootstrap::scheme_to_json(run.scheme);
    if (config.forecaster == ForecasterKind::Lstm) {
        m["train_config"] = forecaster::train_config_to_json(run.train_config);
    }
    if (run.tuning) {
        json trials = json::array();
        for (const auto& t : run.tuning->trials) {
            trials.push_back({{"config", forecaster::train_config_to_json(t.config)},
                              {"validation_loss", t.validation_loss}});
        }
        m["tuning"] = {{"budget", config.tune_budget}, {"trials", trials}};
    }
    json reps = json::array();
    for (std::size_t r = 0; r < run.replicates.size(); ++r) {
        const auto& rep = run.replicates[r];
        json entry{{"replicate", r},
                   {"bootstrap_seed", rep.bootstrap_seed},
                   {"forecaster_seed", rep.forecaster_seed},
                   {"cache_key", rep.cache_key},
                   {"cached", rep.from_cache}};
        if (!rep.history.train_loss.empty()) {
            entry["best_epoch"] = rep.history.best_epoch;
            entry["train_loss"] = rep.history.train_loss;
            entry["validation_loss"] = rep.history.validation_loss;
        }
        reps.push_back(std::move(entry));
    }
    m["replicates"] = reps;
    json timings = json::object();
    for (const auto& [stage, ms] : run.timings_ms) {
        timings[stage] = ms;
    }
    m["timings_ms"] = timings;
    m["outputs"] = outputs;
    out.add("manifest.json", dump_json(m));
    out.commit();

    for (std::size_t j = 0; j < run.metrics.features.size(); ++j) {
        log << run.metrics.features[j] << " mad=" << series::format_double(run.metrics.mad[static_cast<Index>(j)])
            << " msd=" << series::format_double(run.metrics.msd[static_cast<Index>(j)])
            << " abwd=" << series::format_double(run.metrics.abwd[static_cast<Index>(j)]) << "\n";
    }
    return m;
}

json cmd_evaluate(const fs::path& band_csv_path) {
    std::ifstream in(band_csv_path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + band_csv_path.string());
    }
    return band::metrics_json(band::compute_metrics(band::read_band_csv(in)));
}

PipelineConfig config_from_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + manifest_path.string());
    }
    json m;
    try {
        m = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, manifest_path.string() + ": " + e.what());
    }
    if (!m.contains("config") || !m["config"].is_object()) {
        throw Error(ErrorCode::ParseError, manifest_path.string() + ": no config section");
    }
    PipelineConfig config = config_from_json(m["config"]);
    if (m.contains("input") && m["input"].contains("sha256")) {
        const auto expected = m["input"]["sha256"].get<std::string>();
        if (fs::exists(config.input) && sha256_file(config.input) != expected) {
            throw Error(ErrorCode::ParseError, "input " + config.input + " differs from the manifest digest");
        }
    }
    return config;
}

}  // namespace blockband::pipeline
