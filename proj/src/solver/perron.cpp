#include "mpak/solver/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "mpak/core/error.hpp"
#include "mpak/solver/viscosity.hpp"

namespace mpak::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Newton {
  const ObstacleProblem& P;
  int n;
  std::vector<double> g;

  // h_l h_r F at node i, scaled to O(1) coefficients
  double local(int i, double l, double c, double r) const {
    const double hl = P.grid.gap(i - 1), hr = P.grid.gap(i);
    return hl * hr * P.F.eval_unchecked(stencil_jet(P.M, P.grid.r(i), hl, hr, l, c, r));
  }
  double defining(const std::vector<double>& u, int i) const { return local(i, u[i - 1], u[i], u[i + 1]); }

  // Jacobian row of local(i, .): one-sided differences in the jet variables (value,
  // radial gradient, second difference), chained through the linear stencil. Differencing
  // the node values instead mixes the pieces of operators with kinks (Pucci), and the
  // resulting rows stop being subgradients.
  void row(int i, double l, double c, double r, double& dl, double& dc, double& dr) const {
    const double hl = P.grid.gap(i - 1), hr = P.grid.gap(i), s = hl + hr;
    const double k = P.M.log_derivative(P.grid.r(i));
    const double p = (r - l) / s;
    const double d2 = 2.0 * (hl * (r - c) - hr * (c - l)) / (hl * hr * s);
    const int m = P.M.dim();
    const double rad = P.grid.r(i);
    auto F = [&](double v, double pp, double dd) {
      return P.F.eval_unchecked(jets::Jet::radial(m, rad, v, pp, dd, pp == 0.0 ? 0.0 : k * pp));
    };
    const double f0 = F(c, p, d2);
    const double ev = 1e-7 * std::max(1.0, std::abs(c));
    const double ep = 1e-7 * std::max(1.0, std::abs(p));
    const double ed = 1e-7 * std::max(1.0, std::abs(d2));
    const double Fv = (F(c + ev, p, d2) - f0) / ev;
    const double Fp = (F(c, p + ep, d2) - f0) / ep;
    const double Fd = (F(c, p, d2 + ed) - f0) / ed;
    dl = hl * hr * (-Fp / s + Fd * 2.0 / (hl * s));
    dc = hl * hr * (Fv - Fd * 2.0 / (hl * hr));
    dr = hl * hr * (Fp / s + Fd * 2.0 / (hr * s));
  }

  // residual min(g - u, h^2 F) at interior nodes
  double residual(const std::vector<double>& u, std::vector<double>& phi, std::vector<char>* active) const {
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double F = defining(u, i);
      const double gap = g[i] - u[i];
      const bool act = gap <= F;
      phi[i] = act ? gap : F;
      if (active) (*active)[i] = act;
      worst = std::max(worst, std::abs(phi[i]));
    }
    return worst;
  }

  int run(std::vector<double>& u, int max_iter) const {
    std::vector<double> phi(n, 0.0), a(n), b(n), c(n), d(n);
    std::vector<char> active(n, 0);
    double merit = residual(u, phi, &active);
    int it = 0;
    for (; it < max_iter; ++it) {
      double scale = 1.0;
      for (double x : u) scale = std::max(scale, std::abs(x));
      if (merit <= 1e-15 * scale) break;
      for (int i = 1; i + 1 < n; ++i) {
        a[i] = b[i] = c[i] = 0.0;
        d[i] = -phi[i];
        if (active[i]) {
          b[i] = -1.0;
          continue;
        }
        row(i, u[i - 1], u[i], u[i + 1], a[i], b[i], c[i]);
        if (i == 1) a[i] = 0.0;
        if (i == n - 2) c[i] = 0.0;
        if (std::abs(b[i]) < 1e-12) b[i] = -1e-12;
      }
      // Thomas algorithm on rows 1..n-2
      for (int i = 2; i + 1 < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
        if (std::abs(b[i]) < 1e-300) b[i] = -1e-300;
      }
      std::vector<double> du(n, 0.0);
      du[n - 2] = d[n - 2] / b[n - 2];
      for (int i = n - 3; i >= 1; --i) du[i] = (d[i] - c[i] * du[i + 1]) / b[i];
      double step = 0.0;
      for (double x : du) step = std::max(step, std::abs(x));
      if (!std::isfinite(step)) return -it - 1;

      // full steps: with subgradient rows this is the primal-dual active-set iteration
      // (policy iteration for convex operators), which needs no globalisation
      for (int i = 1; i + 1 < n; ++i) u[i] += du[i];
      merit = residual(u, phi, &active);
      if (!std::isfinite(merit)) return -it - 1;
      if (step <= 1e-14 * scale && merit <= 1e-12 * scale) {
        ++it;
        break;
      }
    }
    return it;
  }
};

// Newton from the interpolated solution on a grid of half the resolution, so the
// active set only has to move by a few nodes at each level.
int newton_start(const ObstacleProblem& P, std::vector<double> g, int max_iter,
                 std::vector<double>& u) {
  const int n = P.grid.n;
  if (g.empty())
    for (int i = 0; i < n; ++i) g.push_back(P.obstacle_at(i));
  u[0] = P.left;
  u[n - 1] = P.right;
  int total = 0;
  if (n > 64) {
    Grid coarse = P.grid;
    coarse.n = (n + 1) / 2;
    std::optional<GridFunction> obstacle;
    if (P.obstacle) {
      obstacle = GridFunction(coarse, 0.0);
      for (int i = 0; i < coarse.n; ++i) (*obstacle)[i] = P.obstacle->at(coarse.r(i));
    }
    const ObstacleProblem Q{P.F, P.M, coarse, P.left, P.right, obstacle};
    std::vector<double> v(static_cast<std::size_t>(coarse.n));
    const int it = newton_start(Q, {}, max_iter, v);
    if (it >= 0) {
      const GridFunction c(coarse, std::move(v));
      for (int i = 1; i + 1 < n; ++i) u[i] = std::min(g[i], c.at(P.grid.r(i)));
      total = it;
    }
  }
  if (total == 0)
    for (int i = 1; i + 1 < n; ++i) u[i] = std::min(g[i], P.left + (P.right - P.left) * i / (n - 1.0));
  Newton nw{P, n, std::move(g)};
  const int it = nw.run(u, max_iter);
  return it < 0 ? it - total : it + total;
}

}  // namespace

std::string to_string(SolveStatus s) { return s == SolveStatus::Converged ? "Converged" : "Stalled"; }

double ObstacleProblem::obstacle_at(int i) const { return obstacle ? (*obstacle)[i] : kInf; }

void ObstacleProblem::validate() const {
  if (grid.n < 3 || !(grid.r1 > grid.r0) || !(grid.r0 > 0.0)) throw ParameterError("bad solver grid");
  if (grid.r1 >= M.r_max()) throw ParameterError("solver grid leaves the model");
  if (F.dim() != M.dim()) throw ParameterError("subequation and model dimensions differ");
  if (obstacle) {
    if (!(obstacle->grid == grid))
      throw ParameterError("obstacle lives on a different grid");
    const double tol = 1e-12;
    if (left > (*obstacle)[0] + tol * std::max(1.0, std::abs(left)) ||
        right > (*obstacle)[grid.n - 1] + tol * std::max(1.0, std::abs(right))) {
      std::ostringstream os;
      os << "boundary values (" << left << ", " << right << ") exceed the obstacle ("
         << (*obstacle)[0] << ", " << (*obstacle)[grid.n - 1] << ")";
      throw ParameterError(os.str());
    }
  }
  if (!std::isfinite(left) || !std::isfinite(right)) throw ParameterError("boundary values must be finite");
}

PerronResult perron_obstacle_solve(const ObstacleProblem& P, const PerronOptions& opts) {
  P.validate();
  const int n = P.grid.n;
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = P.obstacle_at(i);

  PerronResult res;
  std::vector<double> u(n);
  u[0] = P.left;
  u[n - 1] = P.right;
  if (opts.newton) {
    const int it = newton_start(P, g, opts.max_newton, u);
    res.newton_iterations = std::abs(it);
    if (it < 0) {
      // Newton gave up; restart the sweeps from the lower barrier
      for (int i = 1; i + 1 < n; ++i) u[i] = std::min({g[i], P.left, P.right});
    }
  } else {
    double floor = std::min(P.left, P.right);
    for (int i = 1; i + 1 < n; ++i) u[i] = std::min(g[i], floor);
  }

  res.status = SolveStatus::Stalled;
  for (res.sweeps = 0; res.sweeps < opts.max_sweeps;) {
    double change = 0.0;
    for (int k = 1; k + 1 < n; ++k) {
      const int i = opts.backward ? n - 1 - k : k;
      const double v = node_solve(P.F, P.M, P.grid, i, u[i - 1], u[i + 1], g[i]);
      change = std::max(change, std::abs(v - u[i]));
      u[i] = v;
    }
    ++res.sweeps;
    res.residual = change;
    if (change < opts.tol) {
      res.status = SolveStatus::Converged;
      break;
    }
  }
  for (int i = 1; i + 1 < n; ++i)
    if (std::isfinite(g[i]) && std::abs(u[i] - g[i]) <= 1e-12 * std::max(1.0, std::abs(g[i])))
      ++res.contact_nodes;
  res.u = GridFunction(P.grid, std::move(u));
  return res;
}

}  // namespace mpak::solver
