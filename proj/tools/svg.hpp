#pragma once

#include <string>
#include <vector>

namespace tangentlab::diag {

// Minimal standalone SVG 1.1 line plots: axes, tick labels, a legend, and
// one polyline per series.  No external plotting dependency.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 860;
  int height = 520;
  bool log_x = false;
  bool log_y = false;
};

void write_svg_plot(const std::string& path, const std::vector<Series>& series,
                    const PlotOptions& options);

}  // namespace tangentlab::diag
