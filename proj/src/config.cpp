#include "sifter/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "sifter/error.hpp"

namespace sifter {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return key.front() != '.' && key.back() != '.';
}

[[noreturn]] void fail(std::string_view source, int line, const std::string& what) {
  throw ConfigError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

ConfigValue parse_value(std::string_view text, std::string_view source, int line) {
  if (text.empty()) fail(source, line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(source, line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\') {
        if (i + 2 >= text.size()) fail(source, line, "dangling escape");
        const char e = text[++i];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(source, line, std::string("unknown escape \\") + e);
        }
      } else if (c == '"') {
        fail(source, line, "unescaped quote inside string");
      }
      out.push_back(c);
    }
    return out;
  }
  if (text == "true") return true;
  if (text == "false") return false;

  const char* begin = text.data();
  const char* end = text.data() + text.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(begin, end, i); ec == std::errc() && p == end) return i;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(begin, end, d); ec == std::errc() && p == end) return d;
  fail(source, line, "cannot parse value '" + std::string(text) + "'");
}

std::string format_value(const ConfigValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
          std::string s(buf, p);
          if (s.find_first_of(".eEn") == std::string::npos) s += ".0";  // keep it a float
          return s;
        } else {
          std::string out = "\"";
          for (char c : v) {
            switch (c) {
              case '\n': out += "\\n"; break;
              case '\t': out += "\\t"; break;
              case '"': out += "\\\""; break;
              case '\\': out += "\\\\"; break;
              default: out.push_back(c);
            }
          }
          return out + "\"";
        }
      },
      value);
}

const char* type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "bool";
    case 1: return "integer";
    case 2: return "float";
    default: return "string";
  }
}

[[noreturn]] void type_mismatch(const std::string& key, const ConfigValue& v, const char* want) {
  throw ConfigError("config key '" + key + "' is a " + type_name(v) + ", expected " + want);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
  KeyValueConfig config;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(source, line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) fail(source, line_no, "bad section name '" + std::string(name) + "'");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (!valid_key(key)) fail(source, line_no, "bad key '" + std::string(key) + "'");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (config.contains(full)) fail(source, line_no, "duplicate key '" + full + "'");
    config.values_[full] = parse_value(trim(line.substr(eq + 1)), source, line_no);
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string KeyValueConfig::to_text() const {
  // Top-level keys first, then sections in sorted order of their prefix.
  std::map<std::string, std::vector<std::pair<std::string, const ConfigValue*>>> sections;
  for (const auto& [key, value] : values_) {
    const auto dot = key.rfind('.');
    const std::string prefix = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    sections[prefix].emplace_back(leaf, &value);
  }
  std::string out;
  for (const auto& [prefix, entries] : sections) {
    if (!prefix.empty()) {
      if (!out.empty()) out += "\n";
      out += "[" + prefix + "]\n";
    }
    for (const auto& [leaf, value] : entries) out += leaf + " = " + format_value(*value) + "\n";
  }
  return out;
}

void KeyValueConfig::set(const std::string& key, ConfigValue value) {
  if (!valid_key(key)) throw ConfigError("bad config key '" + key + "'");
  values_[key] = std::move(value);
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
  for (const auto& [key, value] : other.values_) values_[key] = value;
}

std::optional<std::int64_t> KeyValueConfig::get_int(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  type_mismatch(key, it->second, "integer");
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
  type_mismatch(key, it->second, "number");
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const auto* v = std::get_if<bool>(&it->second)) return *v;
  type_mismatch(key, it->second, "bool");
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  type_mismatch(key, it->second, "string");
}

}  // namespace sifter
