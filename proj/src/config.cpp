#include "sir/config.hpp"

#include <fstream>
#include <sstream>

namespace sir {

namespace {

std::string trim(const std::string& s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::IoError, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& origin) {
  KeyValueConfig config;
  config.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw_error(ErrorCode::InvalidConfig, "expected 'key = value' at " + origin + ":" +
                                                std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw_error(ErrorCode::InvalidConfig, "empty key at " + origin + ":" +
                                                std::to_string(line_no));
    config.entries_[key] = value;
  }
  return config;
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  used_.insert(key);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto v = get(key);
  return v ? *v : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  return parse_double_value(*v, key);
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  return parse_int_value(*v, key);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const std::uint64_t parsed = std::stoull(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument(*v);
    return parsed;
  } catch (const std::exception&) {
    throw_error(ErrorCode::InvalidConfig, "bad unsigned integer for " + key + ": '" + *v + "'");
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw_error(ErrorCode::InvalidConfig, "bad boolean for " + key + ": '" + *v + "'");
}

void KeyValueConfig::override_value(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

void KeyValueConfig::ensure_all_used() const {
  for (const auto& [key, value] : entries_) {
    if (used_.find(key) == used_.end())
      throw_error(ErrorCode::InvalidConfig, "unknown config key '" + key + "' in " + origin_);
  }
}

std::vector<std::int64_t> parse_dims(const std::string& text) {
  std::vector<std::int64_t> dims;
  std::string token;
  for (char c : text + "x") {
    if (c == 'x' || c == ',') {
      if (!token.empty()) {
        dims.push_back(parse_int_value(token, "dims"));
        token.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  if (dims.empty()) throw_error(ErrorCode::InvalidConfig, "empty dims '" + text + "'");
  return dims;
}

std::vector<std::vector<std::int64_t>> parse_dims_list(const std::string& text) {
  std::vector<std::vector<std::int64_t>> out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) {
        out.push_back(parse_dims(token));
        token.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  if (out.empty()) throw_error(ErrorCode::InvalidConfig, "empty dims list '" + text + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) {
        out.push_back(parse_double_value(token, "list"));
        token.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  return out;
}

double parse_double_value(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw_error(ErrorCode::InvalidConfig, "bad number for " + what + ": '" + text + "'");
  }
}

std::int64_t parse_int_value(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw_error(ErrorCode::InvalidConfig, "bad integer for " + what + ": '" + text + "'");
  }
}

std::string dims_to_string(const std::vector<std::int64_t>& dims) {
  std::string out;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k) out += "x";
    out += std::to_string(dims[k]);
  }
  return out;
}

}  // namespace sir
