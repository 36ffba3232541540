#include "mpak/solver/stack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpak/core/error.hpp"
#include "mpak/solver/viscosity.hpp"

namespace mpak::solver {

std::string to_string(StackStatus s) {
  switch (s) {
    case StackStatus::Converged: return "Converged";
    case StackStatus::Stalled: return "Stalled";
    case StackStatus::Diverged: return "Diverged";
  }
  return "Diverged";
}

namespace {

double radius(const StackOptions& o, const manifold::ModelManifold& M, double r_K, int j) {
  if (!o.schedule.empty()) {
    if (j >= static_cast<int>(o.schedule.size())) return -1.0;
    return j == 0 ? r_K : o.schedule[static_cast<std::size_t>(j)];
  }
  if (M.complete()) return r_K * std::ldexp(1.0, j);
  return M.r_max() - (M.r_max() - r_K) * std::ldexp(1.0, -j);
}

}  // namespace

StackReport khasminskii_stack(const jets::Subequation& F, const manifold::ModelManifold& M,
                              double r_K, const manifold::RadialFunction& h, const StackOptions& o) {
  if (!(r_K > 0.0) || !(r_K < M.r_max())) throw ParameterError("stack needs 0 < r_K < R_max");
  if (!(o.epsilon > 0.0)) throw ParameterError("stack needs epsilon > 0");
  if (o.grid_n < 3) throw ParameterError("stack needs at least 3 grid nodes");
  if (!o.schedule.empty()) {
    for (std::size_t k = 1; k < o.schedule.size(); ++k)
      if (!(o.schedule[k] > o.schedule[k - 1])) throw ParameterError("schedule must increase");
  }

  StackReport rep;
  rep.iterates.push_back(GridFunction(Grid::make(r_K, 2.0 * r_K, 3), 0.0));
  for (int i = 0; i < o.max_levels; ++i) {
    const GridFunction& w = rep.iterates.back();
    const double R_i = radius(o, M, r_K, i);
    const double factor = 1.0 - std::ldexp(1.0, -i - 2);
    const double target = o.epsilon * std::ldexp(1.0, -i);
    StackLevel level;
    level.i = i;
    bool accepted = false;
    int flat = 0;
    GridFunction u;
    for (int j = std::max(2, i + 2); j < o.max_extensions; ++j) {
      const double R_j = radius(o, M, r_K, j);
      const double R_prev = radius(o, M, r_K, j - 1);
      if (!(R_j > R_prev) || !(R_j < M.r_max())) break;
      const Grid grid = o.geometric_grid ? Grid::make_geometric(r_K, R_j, o.grid_n)
                                         : Grid::make(r_K, R_j, o.grid_n);
      GridFunction obstacle(grid, 0.0);
      for (int k = 0; k < grid.n; ++k) {
        const double r = grid.r(k);
        const double lambda = std::max(-1.0, -(r - r_K) / (R_prev - r_K));
        obstacle[k] = w.at(r) + lambda;
      }
      obstacle[0] = 0.0;
      const double right = -i - 1.0;
      obstacle[grid.n - 1] = std::max(obstacle[grid.n - 1], right);
      ObstacleProblem P{F, M, grid, 0.0, right, obstacle};
      u = perron_obstacle_solve(P, o.perron).u;

      double delta = 0.0;
      bool lower_ok = true;
      for (int k = 0; k < grid.n; ++k) {
        const double r = grid.r(k);
        if (r <= R_i * (1 + 1e-12)) delta = std::max(delta, std::abs(u[k] - w.at(r)));
        if (k > 0 && !(factor * h(r) < u[k])) lower_ok = false;
      }
      level.attempts.push_back({j, R_j, delta, lower_ok});
      level.j = j;
      level.R = R_j;
      level.delta = delta;
      if (delta <= target && lower_ok) {
        accepted = true;
        break;
      }
      if (level.attempts.size() >= 2) {
        const double prev = level.attempts[level.attempts.size() - 2].delta;
        flat = std::abs(prev - delta) < o.stall_change * std::max(prev, 1e-300) ? flat + 1 : 0;
        if (flat >= 2) break;
      }
    }

    // flags (a), (b), (c) on the accepted or last attempt
    if (u.size() >= 3) {
      const auto viol = viscosity_subharmonic_check(u, F, M);
      level.violations = static_cast<int>(viol.size());
      level.a = viol.empty() && u[0] == 0.0;
      const double floor_value = -i - 1.0;
      bool above = true;
      int reach = u.size() - 1;
      for (int k = 0; k < u.size(); ++k) above = above && u[k] >= floor_value - 1e-9;
      while (reach > 0 && std::abs(u[reach - 1] - floor_value) <= 1e-9) --reach;
      level.reach_radius = u.r(reach);
      level.b = above;
      bool monotone = true;
      for (int k = 0; k < u.size(); ++k)
        monotone = monotone && u[k] <= w.at(u.r(k)) + 1e-9 * std::max(1.0, std::abs(u[k]));
      level.c = accepted && monotone;
    }
    rep.levels.push_back(level);
    if (!accepted) {
      std::ostringstream os;
      if (flat >= 2) {
        rep.status = StackStatus::Stalled;
        os << "level " << i << " stalled: sup |w_" << i + 1 << " - w_" << i << "| on [r_K, R_" << i
           << "] stays at " << level.delta << " > " << target << " as R_j grows";
      } else {
        rep.status = StackStatus::Diverged;
        os << "level " << i << " did not meet condition (c) within the schedule";
      }
      rep.note = os.str();
      rep.iterates.push_back(u);
      rep.potential = u;
      return rep;
    }
    rep.iterates.push_back(u);
  }
  rep.status = StackStatus::Converged;
  rep.potential = rep.iterates.back();
  rep.note = "built " + std::to_string(o.max_levels) + " levels";
  return rep;
}

double envelope_deviation(const GridFunction& w, const manifold::RadialFunction& e, double a, double b,
                          double* best_c) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < w.size(); ++k) {
    const double r = w.r(k);
    if (r < a || r > b) continue;
    const double q = w[k] / e(r);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (!(hi >= lo)) throw ParameterError("envelope window holds no grid nodes");
  if (best_c) *best_c = 0.5 * (lo + hi);
  return (hi - lo) / std::abs(hi + lo);
}

}  // namespace mpak::solver
