#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regspec {

/// Plain-text key-value configuration.
///
///   # comment
///   n = 2000
///   ntau = none, auto, 0.5, 1
///
/// Values are comma-separated lists; surrounding whitespace is trimmed and
/// everything after `#` on a line is ignored. Repeating a key appends.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  bool contains(const std::string& key) const;
  const std::vector<std::string>& values(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::optional<std::string> find_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::optional<double> find_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::optional<std::int64_t> find_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& key) const;

  std::vector<std::string> keys() const;

  void set(const std::string& key, std::vector<std::string> values);

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

double parse_double(std::string_view token);
std::int64_t parse_int(std::string_view token);
std::uint64_t parse_u64(std::string_view token);

}  // namespace regspec
