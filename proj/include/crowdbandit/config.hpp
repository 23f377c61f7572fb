#pragma once

// Flat `key = value` configuration files with dotted namespaces, e.g.
//
//   dataset = synthetic
//   synthetic.n = 300
//   strategies = bbta1:bbta, bbta0:bbta, random, iethresh
//   bbta0.n_prime = 0
//
// Blank lines and lines starting with '#' are ignored.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crowdbandit {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  explicit KeyValueConfig(std::map<std::string, std::string> entries)
      : entries_(std::move(entries)) {}

  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Keys under `prefix.` with the prefix stripped.
  std::map<std::string, std::string> section(const std::string& prefix) const;

 private:
  std::map<std::string, std::string> entries_;
};

std::vector<std::string> split_list(const std::string& value, char sep = ',');
std::int64_t parse_integer(const std::string& text, const std::string& what);
double parse_real(const std::string& text, const std::string& what);

}  // namespace crowdbandit
