#include "stokeslab/config.hpp"

#include <fstream>
#include <stdexcept>

namespace stokeslab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  ConfigFile cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config '" + path + "' line " +
                               std::to_string(lineno) +
                               ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config '" + path + "' line " +
                               std::to_string(lineno) + ": empty key");
    if (cfg.values.count(key))
      cfg.warnings.push_back("duplicate key '" + key + "' at line " +
                             std::to_string(lineno) +
                             "; last occurrence wins");
    cfg.values[key] = value;
  }
  return cfg;
}

}  // namespace stokeslab
