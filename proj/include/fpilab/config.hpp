#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fpilab {

using ConfigEntry = std::pair<std::string, std::string>;

// `key = value` per line, `#` starts a comment, blank lines ignored.
// Throws parse-error with the offending line number.
std::vector<ConfigEntry> parse_config(std::string_view text);
std::vector<ConfigEntry> load_config(const std::string& path);

// "--key=value" for each entry, in file order.
std::vector<std::string> config_tokens(const std::vector<ConfigEntry>& entries);

}  // namespace fpilab
