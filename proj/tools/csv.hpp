#pragma once

#include <map>
#include <string>
#include <vector>

#include <tangentlab/trajectory.hpp>

namespace tangentlab::diag {

// CSV with '#'-prefixed metadata lines before the header row.  Numbers are
// written with 17 significant digits in the classic locale, so re-running
// the producing experiment reproduces the bytes exactly.
struct CsvMetadata {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
};

void write_csv(const std::string& path, const TrajectoryRecord& record,
               const CsvMetadata& metadata);

struct CsvFile {
  TrajectoryRecord record;
  std::map<std::string, std::string> metadata;
};

CsvFile read_csv(const std::string& path);

std::string format_double(double v);

}  // namespace tangentlab::diag
