#include "fbmhd/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fbmhd/common.hpp"

namespace fbmhd {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.map_[key] = Entry{value, lineno};
    cfg.entries_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  map_[key] = Entry{value, 0};
  entries_[key] = value;
}

const Config::Entry& Config::lookup(const std::string& key) const {
  auto it = map_.find(key);
  if (it == map_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const Entry& e = lookup(key);
  char* end = nullptr;
  double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                      "' is not a number: " + e.value);
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
  const Entry& e = lookup(key);
  char* end = nullptr;
  long v = std::strtol(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                      "' is not an integer: " + e.value);
  return v;
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = lookup(key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                    "' is not a bool: " + e.value);
}

std::string Config::get_string(const std::string& key) const { return lookup(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = lookup(key);
  std::vector<double> out;
  std::istringstream ss(e.value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str())
      throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": bad list entry in '" + key +
                        "': " + tok);
    out.push_back(v);
  }
  return out;
}

}  // namespace fbmhd
