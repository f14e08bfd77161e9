#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <tangentlab/errors.hpp>

namespace tangentlab::diag {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& raw, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + raw + "'");
  }
  if (trim(raw.substr(pos)) != "")
    throw ConfigError("key '" + key + "': trailing characters after number in '" + raw + "'");
  return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.values_[key] = Entry{value, lineno};
  }
  return cfg;
}

const Config::Entry& Config::fetch(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  touched_.insert(key);
  return it->second;
}

double Config::number(const std::string& key) const { return parse_number(fetch(key).raw, key); }

double Config::number_or(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return number(key);
}

int Config::integer(const std::string& key) const {
  const double v = number(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ConfigError("key '" + key + "': expected an integer");
  return i;
}

int Config::integer_or(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  return integer(key);
}

bool Config::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string raw = fetch(key).raw;
  if (raw == "true" || raw == "on" || raw == "1") return true;
  if (raw == "false" || raw == "off" || raw == "0") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + raw + "'");
}

std::string Config::text(const std::string& key) const { return fetch(key).raw; }

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  return text(key);
}

std::vector<double> Config::list(const std::string& key) const {
  std::string raw = fetch(key).raw;
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError("key '" + key + "': unterminated list");
    raw = raw.substr(1, raw.size() - 2);
  }
  std::vector<double> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    out.push_back(parse_number(t, key));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<double> Config::list_or(const std::string& key,
                                    const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  return list(key);
}

std::vector<std::string> Config::untouched_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : values_) {
    (void)entry;
    if (!touched_.count(key)) out.push_back(key);
  }
  return out;
}

int Config::line_of(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? 0 : it->second.line;
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& [key, entry] : values_) out << key << " = " << entry.raw << "\n";
  return out.str();
}

void Config::set(const std::string& key, const std::string& raw) {
  values_[key] = Entry{raw, 0};
}

}  // namespace tangentlab::diag
