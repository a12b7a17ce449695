#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranslice/text.hpp"

namespace ranslice {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value config file, a small TOML subset: comments with '#',
// quoted or bare strings, numbers, true/false, and [a, b, c] number lists.
class Config {
 public:
  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
  }

  static Config from_string(const std::string& text, const std::string& origin = "<string>") {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string stripped = strip_comment(line);
      const std::string t = trim(stripped);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
      cfg.raw_[key] = value;
    }
    return cfg;
  }

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    return unquote(it->second);
  }

  std::string require_string(const std::string& key) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) throw ConfigError("missing config key: " + key);
    return unquote(it->second);
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    double v = 0;
    if (!parse_double(it->second, v))
      throw ConfigError("config key " + key + ": not a number: " + it->second);
    return v;
  }

  long long get_int(const std::string& key, long long fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const long long r = static_cast<long long>(v);
    if (static_cast<double>(r) != v)
      throw ConfigError("config key " + key + ": not an integer");
    return r;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw ConfigError("config key " + key + ": expected true or false");
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    const std::string& v = it->second;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      throw ConfigError("config key " + key + ": expected [a, b, ...]");
    std::vector<double> out;
    std::string item;
    std::istringstream body(v.substr(1, v.size() - 2));
    while (std::getline(body, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      double d = 0;
      if (!parse_double(t, d))
        throw ConfigError("config key " + key + ": bad list element: " + t);
      out.push_back(d);
    }
    return out;
  }

  const std::map<std::string, std::string>& raw() const { return raw_; }

 private:
  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
  }

  static std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
  }

  static std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
      return s.substr(1, s.size() - 2);
    return s;
  }

  std::map<std::string, std::string> raw_;
};

}  // namespace ranslice
