#ifndef SIR_CONFIG_HPP
#define SIR_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sir/errors.hpp"

namespace sir {

// Flat key-value configuration files: one `key = value` per line, `#` starts
// a comment. Getters record which keys were read so unknown keys can be
// rejected after a subcommand has consumed its configuration.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void override_value(const std::string& key, const std::string& value);
  void ensure_all_used() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
  std::string origin_;
};

// "40x40" or "40,40" -> {40, 40}.
std::vector<std::int64_t> parse_dims(const std::string& text);
// Comma list of dims groups: "20x20,30x30" -> {{20,20},{30,30}}.
std::vector<std::vector<std::int64_t>> parse_dims_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
double parse_double_value(const std::string& text, const std::string& what);
std::int64_t parse_int_value(const std::string& text, const std::string& what);

std::string dims_to_string(const std::vector<std::int64_t>& dims);

}  // namespace sir

#endif  // SIR_CONFIG_HPP
