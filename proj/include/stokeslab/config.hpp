#pragma once

#include <map>
#include <string>
#include <vector>

namespace stokeslab {

// key = value lines; lines whose first non-blank character is '#' and blank
// lines are ignored; duplicate keys keep the last occurrence and emit a
// warning. Malformed lines raise std::runtime_error with the line number.
struct ConfigFile {
  std::map<std::string, std::string> values;
  std::vector<std::string> warnings;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
};

ConfigFile load_config(const std::string& path);

}  // namespace stokeslab
