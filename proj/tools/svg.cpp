#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <tangentlab/errors.hpp>

namespace tangentlab::diag {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void take(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double m = 0.05 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

}  // namespace

void write_svg_plot(const std::string& path, const std::vector<Series>& series,
                    const PlotOptions& opt) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");

  auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };

  Range rx, ry;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      rx.take(tx(s.x[i]));
      ry.take(ty(s.y[i]));
    }
  rx.pad();
  ry.pad();

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  auto px = [&](double v) { return ml + pw * (tx(v) - rx.lo) / (rx.hi - rx.lo); };
  auto py = [&](double v) { return mt + ph * (1.0 - (ty(v) - ry.lo) / (ry.hi - ry.lo)); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  out << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << opt.title << "</text>\n";

  // Frame and ticks.
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nticks = 6;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / nticks;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / nticks;
    const double gx = ml + pw * static_cast<double>(i) / nticks;
    const double gy = mt + ph * (1.0 - static_cast<double>(i) / nticks);
    out << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx << "\" y2=\""
        << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << gx << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(opt.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(opt.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << opt.x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << opt.y_label << "</text>\n";

  // Series polylines.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) out << " ";
      out << num(px(series[s].x[i])) << "," << num(py(series[s].y[i]));
    }
    out << "\"/>\n";
  }

  // Legend.
  double ly = mt + 14;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 120
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + pw - 114 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label << "</text>\n";
    ly += 18;
  }

  out << "</svg>\n";
}

}  // namespace tangentlab::diag
