#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tangentlab {

// A time series of named real columns; the shared export format of the
// projected-chart integrator and the classical oracles, so the two can be
// diffed column by column.
struct TrajectoryRecord {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::out_of_range("no column named '" + name + "'");
  }
  bool has_column(const std::string& name) const {
    for (const auto& c : columns)
      if (c == name) return true;
    return false;
  }
  std::vector<double> column(const std::string& name) const {
    const std::size_t k = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
};

}  // namespace tangentlab
