#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uavsem {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimal TOML-style configuration: [table] headers, key = value lines,
// '#' comments, strings, integers, floats, booleans and (nested) arrays.
// Arrays may span lines until their brackets balance. Keys are addressed
// as "table.key".
struct ConfigValue {
  std::variant<bool, std::int64_t, double, std::string, std::vector<ConfigValue>>
      data;

  bool is_array() const {
    return std::holds_alternative<std::vector<ConfigValue>>(data);
  }

  double as_double(const std::string& key) const {
    if (std::holds_alternative<double>(data)) return std::get<double>(data);
    if (std::holds_alternative<std::int64_t>(data))
      return static_cast<double>(std::get<std::int64_t>(data));
    throw ConfigError(key + ": expected a number");
  }
  std::int64_t as_int(const std::string& key) const {
    if (std::holds_alternative<std::int64_t>(data))
      return std::get<std::int64_t>(data);
    throw ConfigError(key + ": expected an integer");
  }
  bool as_bool(const std::string& key) const {
    if (std::holds_alternative<bool>(data)) return std::get<bool>(data);
    throw ConfigError(key + ": expected a boolean");
  }
  const std::string& as_string(const std::string& key) const {
    if (std::holds_alternative<std::string>(data))
      return std::get<std::string>(data);
    throw ConfigError(key + ": expected a string");
  }
  const std::vector<ConfigValue>& as_array(const std::string& key) const {
    if (is_array()) return std::get<std::vector<ConfigValue>>(data);
    throw ConfigError(key + ": expected an array");
  }
};

class ConfigTable {
 public:
  static ConfigTable parse(std::string_view text);
  static ConfigTable parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const ConfigValue& require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_double(key);
  }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_int(key);
  }
  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_bool(key);
  }
  std::string get_string(const std::string& key, std::string fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? std::move(fallback) : it->second.as_string(key);
  }

  const std::map<std::string, ConfigValue>& values() const { return values_; }

 private:
  std::map<std::string, ConfigValue> values_;
};

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' ||
                            s[pos] == '\r' || s[pos] == ','))
    ++pos;
}

inline ConfigValue parse_value(std::string_view s, std::size_t& pos);

inline ConfigValue parse_array(std::string_view s, std::size_t& pos) {
  ++pos;  // consume '['
  std::vector<ConfigValue> items;
  while (true) {
    skip_ws(s, pos);
    if (pos >= s.size()) throw ConfigError("unterminated array");
    if (s[pos] == ']') {
      ++pos;
      break;
    }
    items.push_back(parse_value(s, pos));
  }
  return ConfigValue{std::move(items)};
}

inline ConfigValue parse_value(std::string_view s, std::size_t& pos) {
  skip_ws(s, pos);
  if (pos >= s.size()) throw ConfigError("expected a value");
  const char c = s[pos];
  if (c == '[') return parse_array(s, pos);
  if (c == '"') {
    ++pos;
    std::string out;
    while (pos < s.size() && s[pos] != '"') {
      if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
      out.push_back(s[pos++]);
    }
    if (pos >= s.size()) throw ConfigError("unterminated string");
    ++pos;
    return ConfigValue{std::move(out)};
  }
  std::size_t end = pos;
  while (end < s.size() && s[end] != ',' && s[end] != ']' && s[end] != '\n' &&
         s[end] != '\r' && s[end] != '#' && s[end] != ' ' && s[end] != '\t')
    ++end;
  std::string token(s.substr(pos, end - pos));
  pos = end;
  if (token.empty()) throw ConfigError("empty value token");
  if (token == "true") return ConfigValue{true};
  if (token == "false") return ConfigValue{false};
  const auto is_integer = [](const std::string& t) {
    std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  try {
    std::size_t used = 0;
    if (is_integer(token)) {
      const std::int64_t v = std::stoll(token, &used);
      if (used == token.size()) return ConfigValue{v};
    } else {
      const double v = std::stod(token, &used);
      if (used == token.size()) return ConfigValue{v};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("cannot parse value: " + token);
}

}  // namespace detail

inline ConfigTable ConfigTable::parse(std::string_view text) {
  ConfigTable table;
  std::string section;
  std::size_t pos = 0;
  while (pos < text.size()) {
    // Start of a line: whitespace, comments, blank lines.
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' ||
            text[pos] == '\n'))
      ++pos;
    if (pos >= text.size()) break;
    if (text[pos] == '#') {
      while (pos < text.size() && text[pos] != '\n') ++pos;
      continue;
    }
    if (text[pos] == '[') {
      const std::size_t close = text.find(']', pos);
      if (close == std::string_view::npos) throw ConfigError("unterminated [table]");
      section = std::string(text.substr(pos + 1, close - pos - 1));
      if (section.empty()) throw ConfigError("empty [table] name");
      pos = close + 1;
      continue;
    }
    // key = value
    std::size_t key_end = pos;
    while (key_end < text.size() && text[key_end] != '=' && text[key_end] != '\n')
      ++key_end;
    if (key_end >= text.size() || text[key_end] != '=')
      throw ConfigError("expected 'key = value' near: " +
                        std::string(text.substr(pos, std::min<std::size_t>(
                                                         20, text.size() - pos))));
    std::string key(text.substr(pos, key_end - pos));
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key.empty()) throw ConfigError("empty key");
    pos = key_end + 1;
    ConfigValue value = detail::parse_value(text, pos);
    // Trailing garbage (other than comments) on the line is an error.
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos < text.size() && text[pos] == '#')
      while (pos < text.size() && text[pos] != '\n') ++pos;
    if (pos < text.size() && text[pos] != '\n' && text[pos] != '\r')
      throw ConfigError("trailing characters after value for key: " + key);
    const std::string full_key = section.empty() ? key : section + "." + key;
    if (!table.values_.emplace(full_key, std::move(value)).second)
      throw ConfigError("duplicate config key: " + full_key);
  }
  return table;
}

}  // namespace uavsem
