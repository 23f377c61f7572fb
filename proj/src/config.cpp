#include "crowdbandit/config.hpp"

#include <fstream>
#include <sstream>

#include "crowdbandit/errors.hpp"

namespace crowdbandit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_list(const std::string& value, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::int64_t parse_integer(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw ConfigError(what + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw ConfigError(what + ": expected a number, got '" + s + "'");
  return v;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw FormatError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw FormatError(origin + ":" + std::to_string(line_no) + ": empty key");
    if (entries.count(key))
      throw FormatError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    entries[key] = trim(t.substr(eq + 1));
  }
  return KeyValueConfig(std::move(entries));
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto v = get(key);
  return v ? parse_integer(*v, key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_real(*v, key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + *v + "'");
}

std::map<std::string, std::string> KeyValueConfig::section(const std::string& prefix) const {
  std::map<std::string, std::string> out;
  const std::string p = prefix + ".";
  for (auto it = entries_.lower_bound(p); it != entries_.end() && it->first.rfind(p, 0) == 0; ++it)
    out[it->first.substr(p.size())] = it->second;
  return out;
}

}  // namespace crowdbandit
