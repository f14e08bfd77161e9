#include "compare.hpp"

#include <algorithm>
#include <cmath>

#include <tangentlab/errors.hpp>

namespace tangentlab::diag {

namespace {

// Linear interpolation of column values onto query times.
std::vector<double> interp_onto(const std::vector<double>& tq, const std::vector<double>& tb,
                                const std::vector<double>& vb) {
  std::vector<double> out;
  out.reserve(tq.size());
  for (double t : tq) {
    if (t < tb.front() - 1e-12 || t > tb.back() + 1e-12)
      throw ConfigError("compare: time grids do not overlap at t = " + std::to_string(t));
    const auto it = std::lower_bound(tb.begin(), tb.end(), t);
    if (it == tb.begin()) {
      out.push_back(vb.front());
      continue;
    }
    if (it == tb.end()) {
      out.push_back(vb.back());
      continue;
    }
    const std::size_t hi = static_cast<std::size_t>(it - tb.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - tb[lo]) / (tb[hi] - tb[lo]);
    out.push_back((1.0 - w) * vb[lo] + w * vb[hi]);
  }
  return out;
}

}  // namespace

CompareReport compare_records(const TrajectoryRecord& a, const TrajectoryRecord& b,
                              double tolerance, std::vector<std::string> columns) {
  if (!a.has_column("t") || !b.has_column("t"))
    throw ConfigError("compare: both files need a 't' column");
  if (columns.empty()) {
    for (const auto& c : a.columns)
      if (c != "t" && b.has_column(c)) columns.push_back(c);
    if (columns.empty()) throw ConfigError("compare: schemas share no data columns");
  } else {
    for (const auto& c : columns)
      if (!a.has_column(c) || !b.has_column(c))
        throw ConfigError("compare: column '" + c + "' missing from one input");
  }

  const std::vector<double> ta = a.column("t"), tb = b.column("t");
  CompareReport report;
  for (const auto& name : columns) {
    const std::vector<double> va = a.column(name);
    const std::vector<double> vb = interp_onto(ta, tb, b.column(name));
    ColumnDeviation dev;
    dev.name = name;
    double acc = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double d = std::abs(va[i] - vb[i]);
      dev.max_dev = std::max(dev.max_dev, d);
      acc += d;
    }
    dev.mean_dev = acc / static_cast<double>(va.size());
    if (dev.max_dev > tolerance) {
      report.pass = false;
      report.failed_columns.push_back(name);
    }
    report.columns.push_back(dev);
  }
  return report;
}

}  // namespace tangentlab::diag
