#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tangentlab::diag {

// Flat dotted-key configuration format:
//   # comment
//   experiment = kg-projection
//   particle.sigma = 0.3
//   field.phi_c = [0.04, -0.04]
// Values are scalars, strings, booleans, or bracketed numeric lists.
// Parsing records line numbers for diagnostics; consumers must touch every
// key or the validation pass reports the unknown ones.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& name = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  bool flag_or(const std::string& key, bool fallback) const;
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> list(const std::string& key) const;
  std::vector<double> list_or(const std::string& key, const std::vector<double>& fallback) const;

  // Keys present in the file but never read; non-empty means a config error.
  std::vector<std::string> untouched_keys() const;
  int line_of(const std::string& key) const;

  // Canonical round-trippable text (sorted keys), used for manifests.
  std::string serialize() const;

  void set(const std::string& key, const std::string& raw);

 private:
  struct Entry {
    std::string raw;
    int line = 0;
  };
  const Entry& fetch(const std::string& key) const;

  std::string name_;
  std::map<std::string, Entry> values_;
  mutable std::set<std::string> touched_;
};

}  // namespace tangentlab::diag
