#pragma once

#include "shift/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace shift {

/// Flat key=value configuration with [section] headers. Repeated keys
/// accumulate (used for obstacle and patch lists). Lookup keys are
/// "section.key"; keys before any section header have no prefix.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// All values recorded for the key, in file order.
  std::vector<std::string> get_all(const std::string& key) const;

  /// Comma-separated numbers from one value string.
  static std::vector<double> parse_numbers(const std::string& value);

  void set(const std::string& key, const std::string& value);

  /// Apply a "section.key=value" override (CLI flags).
  void apply_override(const std::string& assignment);

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace shift
