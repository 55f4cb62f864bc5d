#include "blockband/bootstrap/sample_io.hpp"

#include "blockband/error.hpp"
#include "blockband/rng.hpp"
#include "blockband/series/csv.hpp"

namespace blockband::bootstrap {

void write_sample_csv(std::ostream& out, const BootstrapSample& sample, const std::vector<std::string>& feature_names) {
    out << "row";
    for (const auto& name : feature_names) {
        out << ',' << name;
    }
    out << '\n';
    for (Index r = 0; r < sample.values.rows(); ++r) {
        out << r;
        for (Index j = 0; j < sample.values.cols(); ++j) {
            out << ',' << series::format_double(sample.values(r, j));
        }
        out << '\n';
    }
}

nlohmann::json scheme_to_json(const BlockScheme& scheme) {
    nlohmann::json j;
    j["variant"] = std::string(variant_name(scheme.variant));
    j["block_length"] = scheme.block_length;
    if (scheme.variant == Variant::MBB) {
        j["mbb_block_count"] = scheme.mbb_block_count ? nlohmann::json(*scheme.mbb_block_count) : nlohmann::json(nullptr);
    }
    if (scheme.variant == Variant::LBB) {
        j["lbb_locality"] = scheme.lbb_locality;
    }
    return j;
}

BlockScheme scheme_from_json(const nlohmann::json& j) {
    BlockScheme scheme;
    scheme.variant = parse_variant(j.at("variant").get<std::string>());
    scheme.block_length = j.at("block_length").get<Index>();
    if (auto it = j.find("mbb_block_count"); it != j.end() && !it->is_null()) {
        scheme.mbb_block_count = it->get<Index>();
    }
    if (auto it = j.find("lbb_locality"); it != j.end()) {
        scheme.lbb_locality = it->get<double>();
    }
    return scheme;
}

nlohmann::json sample_sidecar(const BootstrapSample& sample) {
    nlohmann::json j;
    j["scheme"] = scheme_to_json(sample.scheme);
    j["seed"] = sample.seed;
    j["generator"] = std::string(Rng::generator_name);
    j["rows"] = sample.values.rows();
    j["features"] = sample.values.cols();
    j["block_starts"] = sample.block_starts;
    j["trace"] = sample.index_trace;
    return j;
}

BootstrapSample replay_sample(const nlohmann::json& sidecar, const Matrix& rows) {
    if (sidecar.value("generator", std::string{}) != Rng::generator_name) {
        throw Error(ErrorCode::BadConfig, "sidecar was produced with a different generator");
    }
    const BlockScheme scheme = scheme_from_json(sidecar.at("scheme"));
    return resample(rows, scheme, sidecar.at("seed").get<std::uint64_t>());
}

}  // namespace blockband::bootstrap
