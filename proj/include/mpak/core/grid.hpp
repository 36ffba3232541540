#pragma once

#include <vector>

#include "mpak/core/error.hpp"

namespace mpak {

/// Radial grid on [r0, r1] with n nodes: uniform (r_i = r0 + i*h) or geometric
/// (uniform in log r).
struct Grid {
  double r0 = 1.0;
  double r1 = 2.0;
  int n = 3;
  bool geometric = false;

  static Grid make(double r0, double r1, int n);
  static Grid make_geometric(double r0, double r1, int n);

  /// Spacing of a uniform grid; the mean spacing of a geometric one.
  double h() const { return (r1 - r0) / (n - 1); }
  double r(int i) const;
  /// r(i+1) - r(i).
  double gap(int i) const { return r(i + 1) - r(i); }

  bool operator==(const Grid& o) const {
    return r0 == o.r0 && r1 == o.r1 && n == o.n && geometric == o.geometric;
  }
};

/// Values of a radial function on a grid. -infinity is allowed as a polar sentinel.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(Grid g, std::vector<double> v);
  GridFunction(Grid g, double fill);

  int size() const { return grid.n; }
  double r(int i) const { return grid.r(i); }
  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

  /// Piecewise-linear interpolation; clamps to the end values outside [r0, r1].
  double at(double r) const;
};

}  // namespace mpak
