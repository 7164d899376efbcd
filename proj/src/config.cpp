#include "gln/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gln {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // An inline comment starts at " #"; a leading '#' comments the line.
    std::string body = line;
    if (auto p = body.find('#'); p != std::string::npos) {
      if (p == 0 || body[p - 1] == ' ' || body[p - 1] == '\t')
        body = body.substr(0, p);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "malformed config line " << lineno << ": '" << trim(line)
         << "' (expected key = value)";
      throw std::invalid_argument(os.str());
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream os;
      os << "malformed config line " << lineno << ": empty key";
      throw std::invalid_argument(os.str());
    }
    cfg.kv_[key] = value;  // later lines win
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool Config::has(const std::string& key) const {
  return kv_.count(key) != 0;
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
  used_.insert(key);
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key, double dflt) const {
  used_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  const char* s = it->second.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                                it->second + "' as a number");
  return v;
}

int Config::get_int(const std::string& key, int dflt) const {
  return static_cast<int>(get_long(key, dflt));
}

long Config::get_long(const std::string& key, long dflt) const {
  used_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  const char* s = it->second.c_str();
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                                it->second + "' as an integer");
  return v;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  used_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  const std::string& v = it->second;
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("config key '" + key + "': cannot parse '" + v +
                              "' as a boolean");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& dflt) const {
  used_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<double> out;
  std::string tok;
  std::istringstream in(it->second);
  while (std::getline(in, tok, ',')) {
    tok = [&] {
      const auto b = tok.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = tok.find_last_not_of(" \t");
      return tok.substr(b, e - b + 1);
    }();
    if (tok.empty()) continue;
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
      throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                                  tok + "' as a number list entry");
    out.push_back(v);
  }
  if (out.empty())
    throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

void Config::finish() const {
  std::string bad;
  for (const auto& [k, v] : kv_) {
    if (used_.count(k)) continue;
    if (!bad.empty()) bad += ", ";
    bad += k;
  }
  if (!bad.empty())
    throw std::invalid_argument("unknown config key: " + bad);
}

}  // namespace gln
