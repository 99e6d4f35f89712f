#pragma once

// Flat "key = value" text helpers shared by the config and scenario formats.

#include <string>
#include <utility>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc::detail {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses lines of the form `key = value`. Blank lines and `#` comments are skipped.
KeyValues parse_key_values(const std::string& text);

double parse_double(const std::string& key, const std::string& value);
int parse_int(const std::string& key, const std::string& value);
cplx parse_complex(const std::string& key, const std::string& token);
std::vector<cplx> parse_complex_list(const std::string& key, const std::string& value);

std::string format_double(double v);
std::string format_complex(cplx v);

} // namespace dfrc::detail
