#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

namespace blockband::pipeline {

/**
 * Parses the TOML subset used by run configs into a JSON object: `[table]` and
 * `[a.b]` headers, `key = value` pairs, basic and literal strings, integers,
 * floats, booleans, single-line arrays and `#` comments. Errors name the line.
 * @throws Error(BadConfig)
 */
[[nodiscard]] nlohmann::json parse_toml(std::string_view text);

/// Writes a JSON object of scalars, arrays and one level of tables as TOML.
[[nodiscard]] std::string dump_toml(const nlohmann::json& document);

}  // namespace blockband::pipeline
