#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mmt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered key -> value map parsed from "key = value" text. Blank lines and
/// lines whose first non-space character is '#' are ignored; a '#' after a
/// value starts a trailing comment. Duplicate keys are an error.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view text, std::string_view origin = "<config>");
KeyValues load_key_values(const std::string& path);

/// "key=value\n" lines in key order (no spaces, no comments).
std::string format_key_values(const KeyValues& kv);

// Typed accessors; each throws ConfigError naming the key on a bad value.
long long parse_int(std::string_view key, std::string_view value);
double parse_real(std::string_view key, std::string_view value);
bool parse_bool(std::string_view key, std::string_view value);

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double v);

std::string_view trim(std::string_view s);

}  // namespace mmt
