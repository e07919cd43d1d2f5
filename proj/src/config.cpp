#include "fpilab/config.hpp"

#include <fstream>
#include <sstream>

#include "fpilab/error.hpp"

namespace fpilab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::string_view text) {
  std::vector<ConfigEntry> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::parse_error, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty() || key.find_first_of(" \t") != std::string::npos) {
      fail(ErrorKind::parse_error, "config line " + std::to_string(line_no) + ": bad key");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<ConfigEntry> load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::parse_error, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> config_tokens(const std::vector<ConfigEntry>& entries) {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& [k, v] : entries) out.push_back("--" + k + "=" + v);
  return out;
}

}  // namespace fpilab
