#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fbmhd {

// Flat key=value config with dotted keys ("grid.n1 = 32").  '#' starts a
// comment, blank lines ignored.  Values are kept as strings and converted on
// access; conversion failures report the key and the line it came from.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  // Comma-separated list of doubles.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& lookup(const std::string& key) const;

  std::map<std::string, Entry> map_;
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

}  // namespace fbmhd
