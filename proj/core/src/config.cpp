#include "regspec/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "regspec/error.hpp"

namespace regspec {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(std::string_view token) {
  const std::string s(trim(token));
  if (s.empty()) throw InvalidArgument("expected a number, got an empty value");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(std::string_view token) {
  const auto s = trim(token);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument("not an integer: '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view token) {
  const auto s = trim(token);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument("not an unsigned integer: '" + std::string(s) + "'");
  return v;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty())
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": empty key");
    std::string_view rest = line.substr(eq + 1);
    auto& vals = cfg.entries_[key];
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) vals.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool KeyValueConfig::contains(const std::string& key) const {
  return entries_.count(key) != 0;
}

const std::vector<std::string>& KeyValueConfig::values(
    const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidArgument("missing config key: " + key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto& v = values(key);
  if (v.size() != 1)
    throw InvalidArgument("config key '" + key + "' expects a single value");
  return v.front();
}

std::optional<std::string> KeyValueConfig::find_string(
    const std::string& key) const {
  if (!contains(key)) return std::nullopt;
  return get_string(key);
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_double(get_string(key));
}

std::optional<double> KeyValueConfig::find_double(const std::string& key) const {
  if (!contains(key)) return std::nullopt;
  return get_double(key);
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  return parse_int(get_string(key));
}

std::optional<std::int64_t> KeyValueConfig::find_int(
    const std::string& key) const {
  if (!contains(key)) return std::nullopt;
  return get_int(key);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key) const {
  return parse_u64(get_string(key));
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : values(key)) out.push_back(parse_double(s));
  return out;
}

std::vector<std::int64_t> KeyValueConfig::get_ints(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& s : values(key)) out.push_back(parse_int(s));
  return out;
}

std::vector<std::string> KeyValueConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

void KeyValueConfig::set(const std::string& key, std::vector<std::string> values) {
  entries_[key] = std::move(values);
}

}  // namespace regspec
