#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace grw::cli {

/// Reads the TOML subset used by run configs into a JSON tree: tables,
/// dotted keys, arrays of tables, basic and literal strings, integers, floats
/// (including inf and nan), booleans, arrays and inline tables. Dates and
/// multi-line strings are not supported. Throws ConfigError with a line number.
nlohmann::json parse_toml(std::string_view text);

/// Reads and parses a file; an unreadable file is a ConfigError.
nlohmann::json parse_toml_file(const std::string& path);

}  // namespace grw::cli
