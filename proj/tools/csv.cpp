#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <tangentlab/errors.hpp>
#include <tangentlab/version.hpp>

namespace tangentlab::diag {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const TrajectoryRecord& record,
               const CsvMetadata& metadata) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "# schema_version = " << kCsvSchemaVersion << "\n";
  out << "# tangentlab_version = " << kVersion << "\n";
  for (const auto& [k, v] : metadata.entries) out << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i) out << ",";
    out << record.columns[i];
  }
  out << "\n";
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_double(row[i]);
    }
    out << "\n";
  }
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  CsvFile file;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string& s) {
          while (!s.empty() && (s.front() == ' ')) s.erase(s.begin());
          while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
        };
        strip(key);
        strip(value);
        file.metadata[key] = value;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      cells.push_back(cell);
    }
    if (!header_seen) {
      file.record.columns = cells;
      header_seen = true;
    } else {
      std::vector<double> values;
      values.reserve(cells.size());
      for (const auto& c : cells) values.push_back(std::stod(c));
      if (values.size() != file.record.columns.size())
        throw ConfigError("csv '" + path + "': ragged row");
      file.record.rows.push_back(std::move(values));
    }
  }
  if (!header_seen) throw ConfigError("csv '" + path + "': no header row");
  return file;
}

}  // namespace tangentlab::diag
