#include "mpak/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mpak {

Grid Grid::make(double r0, double r1, int n) {
  if (!(r0 > 0.0) || !(r1 > r0) || !std::isfinite(r1))
    throw ParameterError("grid needs 0 < r0 < r1 < inf, got [" + std::to_string(r0) + ", " +
                         std::to_string(r1) + "]");
  if (n < 3) throw ParameterError("grid needs at least 3 nodes");
  return Grid{r0, r1, n, false};
}

Grid Grid::make_geometric(double r0, double r1, int n) {
  Grid g = make(r0, r1, n);
  g.geometric = true;
  return g;
}

double Grid::r(int i) const {
  if (i == n - 1) return r1;
  if (i == 0) return r0;
  if (geometric) return r0 * std::exp(std::log(r1 / r0) * i / (n - 1));
  return r0 + i * h();
}

GridFunction::GridFunction(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n)
    throw DomainError("grid function length " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(grid.n));
}

GridFunction::GridFunction(Grid g, double fill)
    : grid(g), values(static_cast<std::size_t>(g.n), fill) {}

double GridFunction::at(double r) const {
  if (r <= grid.r0) return values.front();
  if (r >= grid.r1) return values.back();
  const double s = grid.geometric ? std::log(r / grid.r0) / std::log(grid.r1 / grid.r0) * (grid.n - 1)
                                  : (r - grid.r0) / grid.h();
  const int i = std::min(static_cast<int>(s), grid.n - 2);
  const double t = grid.geometric ? (r - grid.r(i)) / grid.gap(i) : s - i;
  return (1.0 - t) * (*this)[i] + t * (*this)[i + 1];
}

}  // namespace mpak
