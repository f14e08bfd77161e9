#pragma once

#include <string>
#include <vector>

#include "csv.hpp"

namespace tangentlab::diag {

struct ColumnDeviation {
  std::string name;
  double max_dev = 0.0;
  double mean_dev = 0.0;
};

struct CompareReport {
  std::vector<ColumnDeviation> columns;
  bool pass = true;
  std::vector<std::string> failed_columns;
};

// Per-column deviations between two trajectory files over their shared
// columns (or an explicit subset).  Both must carry a 't' column; when the
// time grids differ, the second file is linearly interpolated onto the
// first within its covered range.  Missing shared columns or an empty
// intersection is a schema error.
CompareReport compare_records(const TrajectoryRecord& a, const TrajectoryRecord& b,
                              double tolerance, std::vector<std::string> columns = {});

}  // namespace tangentlab::diag
