#include "blockband/band/band_io.hpp"

#include "blockband/error.hpp"
#include "blockband/series/csv.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace blockband::band {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

std::string step_label(const ConfidenceBand& band, Index t) {
    if (band.timestamps.empty()) {
        return std::to_string(t);
    }
    return series::format_iso_date(band.timestamps[static_cast<std::size_t>(t)]);
}

}  // namespace

void write_band_csv(std::ostream& out, const ConfidenceBand& band) {
    using series::format_double;
    out << "t,feature,y,lower,avg,upper\n";
    for (Index t = 0; t < band.steps(); ++t) {
        const std::string label = step_label(band, t);
        for (Index j = 0; j < band.num_features(); ++j) {
            const std::string name = static_cast<Index>(band.feature_names.size()) == band.num_features()
                                         ? band.feature_names[static_cast<std::size_t>(j)]
                                         : "f" + std::to_string(j);
            out << label << ',' << name << ',' << format_double(band.actual(t, j)) << ','
                << format_double(band.lower(t, j)) << ',' << format_double(band.average(t, j)) << ','
                << format_double(band.upper(t, j)) << '\n';
        }
    }
}

ConfidenceBand read_band_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "band file is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "t,feature,y,lower,avg,upper") {
        throw Error(ErrorCode::ParseError, "line 1: unexpected band header '" + line + "'");
    }

    struct Row {
        std::string t;
        std::string feature;
        double values[4];
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split(line);
        const std::string where = "line " + std::to_string(line_no);
        if (fields.size() != 6) {
            throw Error(ErrorCode::ParseError, where + ": expected 6 fields, found " + std::to_string(fields.size()));
        }
        Row row{fields[0], fields[1], {}};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto v = series::parse_double(fields[k + 2]);
            if (!v) {
                throw Error(ErrorCode::ParseError, where + ": bad number '" + fields[k + 2] + "'");
            }
            row.values[k] = *v;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::ParseError, "band file has no data rows");
    }

    std::vector<std::string> features;
    for (const auto& row : rows) {
        if (row.t != rows.front().t) {
            break;
        }
        features.push_back(row.feature);
    }
    const std::size_t width = features.size();
    if (rows.size() % width != 0) {
        throw Error(ErrorCode::ParseError, "band file is truncated: last step has missing features");
    }
    const auto steps = static_cast<Index>(rows.size() / width);
    const auto cols = static_cast<Index>(width);

    ConfidenceBand band;
    band.feature_names = features;
    band.actual.resize(steps, cols);
    band.lower.resize(steps, cols);
    band.average.resize(steps, cols);
    band.upper.resize(steps, cols);
    bool dated = true;
    std::vector<std::int64_t> stamps;
    for (Index t = 0; t < steps; ++t) {
        const std::string& label = rows[static_cast<std::size_t>(t) * width].t;
        for (std::size_t j = 0; j < width; ++j) {
            const Row& row = rows[static_cast<std::size_t>(t) * width + j];
            if (row.t != label || row.feature != features[j]) {
                throw Error(ErrorCode::ParseError, "band rows out of order near step " + std::to_string(t));
            }
            const auto col = static_cast<Index>(j);
            band.actual(t, col) = row.values[0];
            band.lower(t, col) = row.values[1];
            band.average(t, col) = row.values[2];
            band.upper(t, col) = row.values[3];
        }
        if (auto date = series::parse_iso_date(label)) {
            stamps.push_back(*date);
        } else {
            dated = false;
        }
    }
    if (dated) {
        band.timestamps = std::move(stamps);
    }
    return band;
}

nlohmann::json metrics_json(const BandMetrics& metrics) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t f = 0; f < metrics.features.size(); ++f) {
        const auto k = static_cast<Index>(f);
        j[metrics.features[f]] = {{"mad", metrics.mad[k]}, {"msd", metrics.msd[k]}, {"abwd", metrics.abwd[k]}};
    }
    return j;
}

}  // namespace blockband::band
