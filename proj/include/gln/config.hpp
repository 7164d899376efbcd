#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gln {

/// Flat `key = value` configuration with `#` comments. Typed getters mark
/// keys as consumed; finish() rejects whatever was never consumed, so a
/// misspelled key fails loudly instead of silently using a default.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  // Overrides (command-line flags land here after file parsing).
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key, int dflt) const;
  long get_long(const std::string& key, long dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& dflt) const;

  void finish() const;  // throws naming every unconsumed key

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

}  // namespace gln
