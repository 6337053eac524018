#pragma once

// Flat key-value experiment configs with [sections]. Lines are
//   key = value
// under the most recent [section] header; '#' starts a comment. Parse and
// lookup errors carry the line number and the offending key.

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "presmet/core.hpp"

namespace presmet {

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(std::istream& is, const std::string& origin = "config") {
    Config cfg;
    cfg.origin_ = origin;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::string s = strip(line.substr(0, line.find('#')));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']')
          throw ConfigError(origin + ":" + std::to_string(lineno) +
                            ": unterminated section header");
        section = strip(s.substr(1, s.size() - 2));
        if (section.empty())
          throw ConfigError(origin + ":" + std::to_string(lineno) +
                            ": empty section name");
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": expected key = value, got \"" + s + "\"");
      std::string key = strip(s.substr(0, eq));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty key");
      std::string full = section.empty() ? key : section + "." + key;
      if (cfg.entries_.count(full))
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": duplicate key \"" + full + "\"");
      cfg.entries_[full] = Entry{strip(s.substr(eq + 1)), lineno};
    }
    return cfg;
  }

  static Config load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    return parse(is, path);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const std::string& get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
      throw ConfigError(origin_ + ": missing required key \"" + key + "\"");
    return it->second.value;
  }

  std::string get_or(const std::string& key, const std::string& dflt) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? dflt : it->second.value;
  }

  double get_double(const std::string& key) const {
    return to_double(key, get(key));
  }
  double get_double_or(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
  }

  long get_int(const std::string& key) const {
    const std::string& v = get(key);
    try {
      std::size_t pos = 0;
      long out = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError(at(key) + ": key \"" + key +
                        "\" is not an integer: \"" + v + "\"");
    }
  }
  long get_int_or(const std::string& key, long dflt) const {
    return has(key) ? get_int(key) : dflt;
  }

  // comma-separated list of reals
  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, strip(item)));
    if (out.empty())
      throw ConfigError(at(key) + ": key \"" + key + "\" is an empty list");
    return out;
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  static std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::string at(const std::string& key) const {
    auto it = entries_.find(key);
    int line = it == entries_.end() ? 0 : it->second.line;
    return origin_ + ":" + std::to_string(line);
  }

  double to_double(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError(at(key) + ": key \"" + key + "\" is not a number: \"" +
                        v + "\"");
    }
  }

  std::string origin_ = "config";
  std::map<std::string, Entry> entries_;
};

}  // namespace presmet
