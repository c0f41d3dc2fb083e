#pragma once

#include <limits>
#include <span>
#include <vector>

namespace grw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool interior(double t, double margin) const { return t >= lo + margin && t <= hi - margin; }
};

/// Axis-aligned box of chart coordinates.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int dim, double half_width) {
    return Box{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)};
  }

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(std::span<const double> x, double margin) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int k = 0; k < dim(); ++k)
      if (!(x[k] >= lo[k] + margin && x[k] <= hi[k] - margin)) return false;
    return true;
  }

  bool within(const Box& outer, double margin) const {
    if (outer.dim() != dim()) return false;
    for (int k = 0; k < dim(); ++k)
      if (lo[k] < outer.lo[k] + margin || hi[k] > outer.hi[k] - margin) return false;
    return true;
  }
};

/// Sample points must keep this distance (chart units) from the fiber box.
inline constexpr double kChartMargin = 1e-3;

}  // namespace grw
