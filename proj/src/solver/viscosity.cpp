#include "mpak/solver/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpak/core/error.hpp"

namespace mpak::solver {

Jet stencil_jet(const ModelManifold& M, double r, double hl, double hr, double left, double mid,
                double right) {
  const double p = (right - left) / (hl + hr);
  const double d2 = 2.0 * (hl * (right - mid) - hr * (mid - left)) / (hl * hr * (hl + hr));
  const double tang = p == 0.0 ? 0.0 : M.log_derivative(r) * p;
  return Jet::radial(M.dim(), r, mid, p, d2, tang);
}

Jet discrete_jet(const GridFunction& u, const ModelManifold& M, int i) {
  if (i < 1 || i > u.size() - 2) throw DomainError("discrete jet needs an interior node");
  const double l = u[i - 1], c = u[i], r = u[i + 1];
  if (!std::isfinite(l) || !std::isfinite(c) || !std::isfinite(r)) {
    std::ostringstream os;
    os << "discrete jet at node " << i << " has a non-finite neighbour";
    throw DomainError(os.str());
  }
  return stencil_jet(M, u.r(i), u.grid.gap(i - 1), u.grid.gap(i), l, c, r);
}

Kink kink_at(const GridFunction& u, int i, double ratio) {
  const double sl = (u[i] - u[i - 1]) / u.grid.gap(i - 1);
  const double sr = (u[i + 1] - u[i]) / u.grid.gap(i);
  const double jump = sr - sl;
  const double scale = ratio * std::max({1.0, std::abs(sl), std::abs(sr)});
  if (jump > scale) return Kink::Convex;
  if (jump < -scale) return Kink::Concave;
  return Kink::None;
}

std::vector<Violation> viscosity_subharmonic_check(const GridFunction& u, const Subequation& F,
                                                   const ModelManifold& M, double tol,
                                                   const std::function<bool(int)>& where) {
  std::vector<Violation> out;
  for (int i = 1; i + 1 < u.size(); ++i) {
    if (where && !where(i)) continue;
    if (!std::isfinite(u[i])) continue;
    if (kink_at(u, i) == Kink::Convex) continue;
    const double v = F.eval_unchecked(discrete_jet(u, M, i));
    if (!(v >= -tol)) out.push_back({i, u.r(i), v});
  }
  return out;
}

double node_solve(const Subequation& F, const ModelManifold& M, const Grid& grid, int i,
                  double left, double right, double obstacle) {
  if (!std::isfinite(left) || !std::isfinite(right)) throw DomainError("node_solve needs finite neighbours");
  const double r = grid.r(i);
  const double hl = grid.gap(i - 1), hr = grid.gap(i);
  auto value = [&](double x) { return F.eval_unchecked(stencil_jet(M, r, hl, hr, left, x, right)); };

  const bool capped = std::isfinite(obstacle);
  if (capped && value(obstacle) >= 0.0) return obstacle;

  double delta = std::max(1.0, std::abs(left - right));
  double lo = std::min(left, right) - delta;
  double hi = capped ? obstacle : std::max(left, right) + delta;
  if (capped) lo = std::min(lo, obstacle - delta);
  double f_lo = value(lo);
  double f_hi = value(hi);
  for (int k = 0; k < 80 && !(f_lo >= 0.0); ++k) {
    delta *= 2.0;
    lo -= delta;
    f_lo = value(lo);
  }
  for (int k = 0; k < 80 && !capped && f_hi >= 0.0; ++k) {
    delta *= 2.0;
    hi += delta;
    f_hi = value(hi);
  }
  if (f_lo == f_hi) {
    // defining value does not see u_i (pure gradient subequations)
    if (capped && f_lo >= -jets::kBoundaryEps) return obstacle;
    std::ostringstream os;
    os << "node_solve at node " << i << " (r = " << r << "): defining value " << f_lo
       << " does not depend on u_i" << (capped ? " and the node is not a member" : " and there is no obstacle");
    throw NumericalError(os.str());
  }
  if (!(f_lo >= 0.0) || f_hi >= 0.0) {
    std::ostringstream os;
    os << "node_solve at node " << i << " (r = " << r << "): no sign change in [" << lo << ", " << hi
       << "], values " << f_lo << ", " << f_hi;
    throw NumericalError(os.str());
  }
  // relative precision near the ulp: the 1/h^2 stencil magnifies any absolute floor
  const double eps = 4.0 * std::numeric_limits<double>::epsilon();
  for (int k = 0; k < 200 && hi - lo > eps * std::max(std::abs(lo), std::abs(hi)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (value(mid) >= 0.0 ? lo : hi) = mid;
  }
  return capped ? std::min(lo, obstacle) : lo;
}

}  // namespace mpak::solver
