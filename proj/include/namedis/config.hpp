#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace namedis {

// Flat `key = value` configuration in a small TOML subset: `#` comments,
// `[section]` headers (prefixing keys with "section."), numbers (including
// inf/-inf), double-quoted strings, and one-line arrays of numbers.
// Used for parameter files, candidate grids, and generator specs.
class FlatConfig {
 public:
  using Value = std::variant<double, std::string, std::vector<double>>;

  static FlatConfig parse(std::string_view text, std::string_view source = "<config>");
  static FlatConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  bool empty() const { return values_.empty(); }

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  std::string string_or(const std::string& key, std::string fallback) const;
  // A scalar is returned as a one-element list.
  std::vector<double> numbers(const std::string& key) const;

  void set(const std::string& key, Value value) { values_[key] = std::move(value); }
  void erase(const std::string& key) { values_.erase(key); }

  // Keys under `prefix.` with the prefix removed.
  FlatConfig subtree(const std::string& prefix) const;
  const std::map<std::string, Value>& entries() const { return values_; }

  // Sorted by key, one entry per line; parse(dump()) round-trips.
  std::string dump() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::string, Value> values_;
};

// Shortest round-trip text for a number ("inf", "-inf", integers without
// a decimal point).
std::string format_number(double value);

}  // namespace namedis
