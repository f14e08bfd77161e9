#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "tangentlab/errors.hpp"

namespace tangentlab {

// One coordinate axis of the configuration grid: n uniformly spaced points
// on [min, max].  Axes discretize either the particle position x or one
// field amplitude phi(x_i).
struct GridAxis {
  std::string label;
  double min = -1.0;
  double max = 1.0;
  int n = 0;

  double spacing() const { return (max - min) / static_cast<double>(n - 1); }
  double point(int i) const { return min + spacing() * static_cast<double>(i); }

  void validate() const {
    if (n < 8) throw ConfigError("grid axis '" + label + "': n must be >= 8, got " + std::to_string(n));
    if (!(max > min)) throw ConfigError("grid axis '" + label + "': max must exceed min");
  }
};

// Cartesian product of axes, flattened row-major with axis 0 slowest.
// Axis order is fixed: particle axis first (when present), then field/mode
// axes in site order.
class ConfigGrid {
 public:
  explicit ConfigGrid(std::vector<GridAxis> axes, std::size_t max_points = kDefaultMaxPoints)
      : axes_(std::move(axes)) {
    if (axes_.empty()) throw ConfigError("grid needs at least one axis");
    total_ = 1;
    for (const auto& ax : axes_) {
      ax.validate();
      total_ *= static_cast<std::size_t>(ax.n);
      if (total_ > max_points)
        throw ConfigError("grid exceeds point budget (" + std::to_string(max_points) + ")");
    }
    strides_.resize(axes_.size());
    std::size_t s = 1;
    for (int d = static_cast<int>(axes_.size()) - 1; d >= 0; --d) {
      strides_[static_cast<std::size_t>(d)] = s;
      s *= static_cast<std::size_t>(axes_[static_cast<std::size_t>(d)].n);
    }
    measure_ = 1.0;
    for (const auto& ax : axes_) measure_ *= ax.spacing();
  }

  std::size_t total_points() const { return total_; }
  std::size_t rank() const { return axes_.size(); }
  const GridAxis& axis(std::size_t d) const { return axes_.at(d); }
  const std::vector<GridAxis>& axes() const { return axes_; }
  std::size_t stride(std::size_t d) const { return strides_[d]; }

  // Product of axis spacings; the quadrature weight of one grid point.
  double measure() const { return measure_; }

  int index_along(std::size_t flat, std::size_t d) const {
    return static_cast<int>((flat / strides_[d]) % static_cast<std::size_t>(axes_[d].n));
  }
  double coord(std::size_t flat, std::size_t d) const {
    return axes_[d].point(index_along(flat, d));
  }

  bool same_shape(const ConfigGrid& other) const {
    if (axes_.size() != other.axes_.size()) return false;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      const auto &a = axes_[d], &b = other.axes_[d];
      if (a.n != b.n || a.min != b.min || a.max != b.max) return false;
    }
    return true;
  }

  static constexpr std::size_t kDefaultMaxPoints = 1u << 22;  // 4M points ~ 64 MB complex

 private:
  std::vector<GridAxis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
  double measure_ = 1.0;
};

using GridPtr = std::shared_ptr<const ConfigGrid>;

inline GridPtr make_grid(std::vector<GridAxis> axes) {
  return std::make_shared<const ConfigGrid>(std::move(axes));
}

// Symmetric axis of n points on [-halfwidth, halfwidth] shifted by center.
inline GridAxis symmetric_axis(const std::string& label, double halfwidth, int n,
                               double center = 0.0) {
  return GridAxis{label, center - halfwidth, center + halfwidth, n};
}

}  // namespace tangentlab
