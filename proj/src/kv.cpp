#include "kv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace dfrc::detail {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected `key = value`");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError("key `" + key + "`: not a number: `" + value + "`");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError("key `" + key + "`: not an integer: `" + value + "`");
  return static_cast<int>(v);
}

cplx parse_complex(const std::string& key, const std::string& token) {
  const auto comma = token.find(',');
  if (comma == std::string::npos)
    throw ConfigError("key `" + key + "`: complex entry must be `re,im`: `" + token + "`");
  return {parse_double(key, token.substr(0, comma)), parse_double(key, token.substr(comma + 1))};
}

std::vector<cplx> parse_complex_list(const std::string& key, const std::string& value) {
  std::vector<cplx> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) out.push_back(parse_complex(key, tok));
  return out;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_complex(cplx v) { return format_double(v.real()) + "," + format_double(v.imag()); }

} // namespace dfrc::detail
