#include "blockband/pipeline/toml_lite.hpp"

#include "blockband/error.hpp"
#include "blockband/series/csv.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace blockband::pipeline {

namespace {

class LineParser {
public:
    LineParser(std::string_view text, std::size_t line_no) : text_(text), line_no_(line_no) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::BadConfig, "config line " + std::to_string(line_no_) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    [[nodiscard]] bool at_end_or_comment() {
        skip_space();
        return pos_ >= text_.size() || text_[pos_] == '#';
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string key() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '"') {
            return basic_string();
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                ++pos_;
            } else {
                break;
            }
        }
        if (start == pos_) fail("expected a key");
        return std::string(text_.substr(start, pos_ - start));
    }

    nlohmann::json value() {
        skip_space();
        if (pos_ >= text_.size()) fail("missing value");
        const char c = text_[pos_];
        if (c == '"') return basic_string();
        if (c == '\'') return literal_string();
        if (c == '[') return array();
        return bare_value();
    }

private:
    std::string basic_string() {
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_++];
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("unterminated escape");
                const char e = text_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    std::string literal_string() {
        ++pos_;
        const std::size_t end = text_.find('\'', pos_);
        if (end == std::string_view::npos) fail("unterminated string");
        std::string out(text_.substr(pos_, end - pos_));
        pos_ = end + 1;
        return out;
    }

    nlohmann::json array() {
        ++pos_;
        nlohmann::json out = nlohmann::json::array();
        while (true) {
            if (consume(']')) return out;
            out.push_back(value());
            if (consume(',')) continue;
            if (consume(']')) return out;
            fail("expected ',' or ']' in array");
        }
    }

    nlohmann::json bare_value() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '#' &&
               text_[pos_] != ' ' && text_[pos_] != '\t') {
            ++pos_;
        }
        std::string token(text_.substr(start, pos_ - start));
        if (token == "true") return true;
        if (token == "false") return false;
        std::string digits;
        for (char c : token) {
            if (c != '_') digits.push_back(c);
        }
        const bool is_float = digits.find_first_of(".eE") != std::string::npos;
        if (!is_float) {
            std::int64_t v = 0;
            const char* first = digits.data() + (digits.starts_with('+') ? 1 : 0);
            auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), v);
            if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) return v;
            std::uint64_t u = 0;  // seeds above 2^63
            auto [uptr, uec] = std::from_chars(first, digits.data() + digits.size(), u);
            if (uec == std::errc{} && uptr == digits.data() + digits.size()) return u;
        } else if (auto v = series::parse_double(digits)) {
            return *v;
        }
        fail("cannot parse value '" + token + "'");
    }

    std::string_view text_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

void dump_value(std::ostream& out, const nlohmann::json& v) {
    if (v.is_string()) {
        out << '"';
        for (char c : v.get<std::string>()) {
            switch (c) {
                case '"': out << "\\\""; break;
                case '\\': out << "\\\\"; break;
                case '\n': out << "\\n"; break;
                case '\t': out << "\\t"; break;
                default: out << c;
            }
        }
        out << '"';
    } else if (v.is_boolean()) {
        out << (v.get<bool>() ? "true" : "false");
    } else if (v.is_number_float()) {
        std::string text = series::format_double(v.get<double>());
        if (text.find_first_of(".eE") == std::string::npos) {
            text += ".0";
        }
        out << text;
    } else if (v.is_number()) {
        out << v.dump();
    } else if (v.is_array()) {
        out << '[';
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k > 0) out << ", ";
            dump_value(out, v[k]);
        }
        out << ']';
    } else {
        throw Error(ErrorCode::BadConfig, "cannot write value " + v.dump() + " as TOML");
    }
}

}  // namespace

nlohmann::json parse_toml(std::string_view text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        start = end + 1;

        LineParser p(line, line_no);
        if (p.at_end_or_comment()) {
            if (end == text.size()) break;
            continue;
        }
        if (p.consume('[')) {
            table = &root;
            do {
                const std::string name = p.key();
                if (table->contains(name) && !(*table)[name].is_object()) p.fail("'" + name + "' is not a table");
                table = &(*table)[name];
                if (table->is_null()) *table = nlohmann::json::object();
            } while (p.consume('.'));
            if (!p.consume(']')) p.fail("expected ']'");
        } else {
            const std::string name = p.key();
            if (!p.consume('=')) p.fail("expected '=' after key '" + name + "'");
            nlohmann::json v = p.value();
            if (table->contains(name)) p.fail("duplicate key '" + name + "'");
            (*table)[name] = std::move(v);
        }
        if (!p.at_end_or_comment()) p.fail("unexpected trailing characters");
        if (end == text.size()) break;
    }
    return root;
}

std::string dump_toml(const nlohmann::json& document) {
    std::ostringstream out;
    for (const auto& [key, value] : document.items()) {
        if (!value.is_object()) {
            out << key << " = ";
            dump_value(out, value);
            out << '\n';
        }
    }
    for (const auto& [key, value] : document.items()) {
        if (value.is_object()) {
            if (out.tellp() > 0) {
                out << '\n';
            }
            out << '[' << key << "]\n";
            for (const auto& [k, v] : value.items()) {
                if (v.is_object()) {
                    throw Error(ErrorCode::BadConfig, "nested tables deeper than one level are not supported");
                }
                out << k << " = ";
                dump_value(out, v);
                out << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace blockband::pipeline
