#include "blockband/series/csv.hpp"

#include "blockband/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace blockband::series {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
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

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t");
    return std::string(text.substr(first, last - first + 1));
}

}  // namespace

const std::vector<std::string>& default_ohlcv_features() {
    static const std::vector<std::string> names{"Open", "High", "Low", "Close", "Volume"};
    return names;
}

std::optional<std::int64_t> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto parse_part = [&](std::size_t pos, std::size_t len, auto& out) {
        const char* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, out);
        return ec == std::errc{} && ptr == first + len;
    };
    if (!parse_part(0, 4, y) || !parse_part(5, 2, m) || !parse_part(8, 2, d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return std::string(buf.data());
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

MultiSeries read_series_csv(std::istream& in, const std::vector<std::string>& features) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::EmptyFile, "no header row");
    }
    std::vector<std::string> header = split_fields(line);
    for (auto& h : header) {
        h = trim(h);
    }
    if (header.empty() || header.front() != "Date") {
        throw Error(ErrorCode::ParseError, "line 1: first column must be 'Date'");
    }

    std::vector<std::string> selected = features;
    if (selected.empty()) {
        const auto& ohlcv = default_ohlcv_features();
        const bool has_all = std::all_of(ohlcv.begin(), ohlcv.end(), [&](const std::string& name) {
            return std::find(header.begin(), header.end(), name) != header.end();
        });
        if (has_all) {
            selected = ohlcv;
        } else {
            for (std::size_t c = 1; c < header.size(); ++c) {
                if (header[c] != "Adj Close") {
                    selected.push_back(header[c]);
                }
            }
        }
    }
    if (selected.empty()) {
        throw Error(ErrorCode::ParseError, "line 1: no feature columns");
    }
    std::vector<std::size_t> columns;
    for (const auto& name : selected) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw Error(ErrorCode::ParseError, "line 1: missing column '" + name + "'");
        }
        columns.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    std::vector<std::int64_t> dates;
    std::vector<double> flat;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        const std::string where = "line " + std::to_string(line_no);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::ParseError, where + ": expected " + std::to_string(header.size()) +
                                                   " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (trim(fields[c]).empty()) {
                throw Error(ErrorCode::ParseError, where + ", column '" + header[c] + "': empty cell");
            }
        }
        const auto date = parse_iso_date(trim(fields[0]));
        if (!date) {
            throw Error(ErrorCode::ParseError, where + ", column 'Date': invalid date '" + fields[0] + "'");
        }
        if (!dates.empty() && *date <= dates.back()) {
            throw Error(ErrorCode::ParseError, where + ": dates must be strictly increasing");
        }
        dates.push_back(*date);
        for (std::size_t c : columns) {
            const auto value = parse_double(trim(fields[c]));
            if (!value) {
                throw Error(ErrorCode::ParseError,
                            where + ", column '" + header[c] + "': not a number '" + fields[c] + "'");
            }
            flat.push_back(*value);
        }
    }
    if (dates.empty()) {
        throw Error(ErrorCode::EmptyFile, "header present but no data rows");
    }
    const auto rows = static_cast<Index>(dates.size());
    const auto cols = static_cast<Index>(columns.size());
    Matrix values = Eigen::Map<const Matrix>(flat.data(), rows, cols);
    return MultiSeries(std::move(dates), std::move(values), std::move(selected));
}

MultiSeries read_series_csv(const std::filesystem::path& path, const std::vector<std::string>& features) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
    }
    return read_series_csv(in, features);
}

void write_series_csv(std::ostream& out, const MultiSeries& series) {
    out << "Date";
    for (const auto& name : series.feature_names()) {
        out << ',' << name;
    }
    out << '\n';
    for (Index t = 0; t < series.length(); ++t) {
        out << format_iso_date(series.timestamps()[static_cast<std::size_t>(t)]);
        for (Index j = 0; j < series.num_features(); ++j) {
            out << ',' << format_double(series.values()(t, j));
        }
        out << '\n';
    }
}

}  // namespace blockband::series
