#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace sifter {

/// Typed scalar held by a configuration key.
using ConfigValue = std::variant<bool, std::int64_t, double, std::string>;

/// Flat key/value store with dotted keys ("purifier.remove_time").
///
/// Text form is a small TOML subset:
///
///     # comment
///     seed = 7
///     [purifier]
///     binarize = "localdiff"
///     k_size = 21
///
/// Strings are double-quoted (\" \\ \n \t escapes), integers are decimal,
/// floats carry a '.', 'e', "inf" or "nan", booleans are true/false. to_text()
/// emits a canonical form: keys sorted, top-level keys first, one section
/// header per dotted prefix. parse(to_text(c)) == c for every c.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  static KeyValueConfig load(const std::string& path);

  std::string to_text() const;

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, ConfigValue>& values() const noexcept { return values_; }

  void set(const std::string& key, ConfigValue value);
  /// Copies every key of `other` over this one.
  void merge(const KeyValueConfig& other);

  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<std::string> get_string(const std::string& key) const;

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    return get_int(key).value_or(fallback);
  }
  double get_double(const std::string& key, double fallback) const {
    return get_double(key).value_or(fallback);
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return get_bool(key).value_or(fallback);
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return get_string(key).value_or(fallback);
  }

  friend bool operator==(const KeyValueConfig&, const KeyValueConfig&) = default;

 private:
  std::map<std::string, ConfigValue> values_;
};

}  // namespace sifter
