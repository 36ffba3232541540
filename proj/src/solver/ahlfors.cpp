#include "mpak/solver/ahlfors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpak/core/error.hpp"
#include "mpak/jets/catalog.hpp"
#include "mpak/solver/perron.hpp"
#include "mpak/solver/viscosity.hpp"

namespace mpak::solver {

using manifold::RadialFunction;
using manifold::Status;

Verdict eikonal_potential(const manifold::ModelManifold& M, double r_K) {
  if (!(r_K > 0.0) || !(r_K < M.r_max())) throw ParameterError("eikonal potential needs 0 < r_K < R_max");
  Verdict v;
  v.witness = RadialFunction([r_K](double r) { return -(r - r_K); }, [](double) { return -1.0; },
                             [](double) { return 0.0; }, r_K, M.r_max(), "-(r - r_K)");
  // |w'| = 1 at every radius; the eikonal defining value 1 - |p| vanishes identically
  const jets::Subequation E = jets::make_subeq("eikonal", {}, M.dim());
  double margin = std::numeric_limits<double>::infinity();
  const double top = M.complete() ? 100.0 * r_K : M.r_max();
  for (int k = 0; k <= 64; ++k) {
    const double r = r_K + (top - r_K) * k / 64.0 * (1.0 - 1e-9);
    const auto J = jets::Jet::radial(M.dim(), r, -(r - r_K), -1.0, 0.0, -M.log_derivative(r));
    margin = std::min(margin, E.eval_unchecked(J));
  }
  v.diagnostics["eikonal_margin"] = margin;
  v.diagnostics["inf_w"] = M.complete() ? -std::numeric_limits<double>::infinity() : -(M.r_max() - r_K);
  if (M.complete()) {
    v.status = Status::Holds;
    v.note = "w = -(r - r_K) is an eikonal exhaustion";
  } else {
    v.status = Status::Fails;
    std::ostringstream os;
    os << "w = -(r - r_K) is bounded below by " << -(M.r_max() - r_K) << " on the incomplete model";
    v.note = os.str();
  }
  return v;
}

Verdict ahlfors_check(const jets::Subequation& H, const manifold::ModelManifold& M, const GridFunction& u,
                      double tol) {
  double top = -std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw NotApplicable("Ahlfors test function must be finite");
    if (u[i] > top) {
      top = u[i];
      arg = i;
    }
  }
  if (!(top > 0.0)) throw NotApplicable("Ahlfors test function is nowhere positive");
  const auto viol = viscosity_subharmonic_check(u, H, M, tol, [&u](int i) { return u[i] > 0.0; });
  if (!viol.empty()) {
    std::ostringstream os;
    os << "test function is not " << H.name() << "-subharmonic where positive (" << viol.size()
       << " nodes, first at r = " << viol.front().radius << ")";
    throw NotApplicable(os.str());
  }
  const double boundary = std::max({0.0, u[0], u[u.size() - 1]});
  Verdict v;
  v.diagnostics["sup_u"] = top;
  v.diagnostics["boundary_sup_u_plus"] = boundary;
  v.diagnostics["argmax_radius"] = u.r(arg);
  v.witness = RadialFunction::from_grid(u);
  if (top - boundary <= 1e-10 * std::max(1.0, std::abs(top))) {
    v.status = Status::Holds;
    v.note = "maximum attained on the boundary";
  } else {
    v.status = Status::Fails;
    std::ostringstream os;
    os << "interior maximum " << top << " at r = " << u.r(arg) << " exceeds the boundary value " << boundary;
    v.note = os.str();
  }
  return v;
}

Verdict ahlfors_limit_check(const jets::Subequation& H, const manifold::ModelManifold& M,
                            const RadialFunction& u, double r_K, const std::vector<double>& schedule,
                            int grid_n, double tol, double settle) {
  if (schedule.size() < 2) throw ParameterError("limit check needs at least two radii");
  for (std::size_t k = 0; k < schedule.size(); ++k)
    if (!(schedule[k] > (k ? schedule[k - 1] : r_K)) || !(schedule[k] < M.r_max()))
      throw ParameterError("schedule must increase from r_K and stay below R_max");
  std::vector<double> sups;
  for (double R : schedule) {
    const GridFunction s = u.sample(Grid::make(r_K, R, grid_n));
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.size(); ++i) {
      if (!std::isfinite(s[i])) throw NotApplicable("Ahlfors test function must be finite");
      top = std::max(top, s[i]);
    }
    const auto viol = viscosity_subharmonic_check(s, H, M, tol, [&s](int i) { return s[i] > 0.0; });
    if (!viol.empty()) {
      std::ostringstream os;
      os << "test function is not " << H.name() << "-subharmonic where positive on [" << r_K << ", " << R
         << "] (worst defect " << viol.front().defect << " at r = " << viol.front().radius << ")";
      throw NotApplicable(os.str());
    }
    sups.push_back(top);
  }
  const double last = sups.back();
  const double step = last - sups[sups.size() - 2];
  if (!(last > 0.0)) throw NotApplicable("Ahlfors test function is nowhere positive");
  if (step > settle * (1.0 + std::abs(last)))
    throw NotApplicable("suprema still growing along the schedule; u is not seen to be bounded");
  const double boundary = std::max(0.0, u(r_K));
  Verdict v;
  v.diagnostics["sup_u"] = last;
  v.diagnostics["last_increment"] = step;
  v.diagnostics["boundary_sup_u_plus"] = boundary;
  v.witness = u;
  if (last - boundary <= 1e-10 * std::max(1.0, std::abs(last))) {
    v.status = Status::Holds;
    v.note = "supremum attained at r_K";
  } else {
    v.status = Status::Fails;
    std::ostringstream os;
    os << "sup u settles at " << last << " above u^+(r_K) = " << boundary
       << " while the outer boundary recedes";
    v.note = os.str();
  }
  return v;
}

CapacitorSequence infinity_capacitor_sequence(const manifold::ModelManifold& M, double r_K,
                                              std::vector<double> schedule, int grid_n) {
  if (!(r_K > 0.0) || !(r_K < M.r_max())) throw ParameterError("capacitor sequence needs 0 < r_K < R_max");
  if (schedule.empty())
    for (int j = 1; j <= 8; ++j)
      schedule.push_back(M.complete() ? r_K * std::ldexp(1.0, j) : M.r_max() - (M.r_max() - r_K) * std::ldexp(1.0, -j));
  for (std::size_t k = 0; k < schedule.size(); ++k)
    if (!(schedule[k] > (k ? schedule[k - 1] : r_K)) || !(schedule[k] < M.r_max()))
      throw ParameterError("schedule must increase from r_K and stay below R_max");

  const jets::Subequation F = jets::make_subeq("inf_laplacian", {}, M.dim());
  CapacitorSequence out;
  for (double R : schedule) {
    const ObstacleProblem P{F, M, Grid::make(r_K, R, grid_n), 1.0, 0.0, std::nullopt};
    GridFunction u = perron_obstacle_solve(P).u;
    for (int i = 0; i < u.size(); ++i) u[i] = 1.0 - u[i];
    double s = u.at(std::min(2.0 * r_K, R));
    for (int i = 0; i < u.size() && u.r(i) <= 2.0 * r_K; ++i) s = std::max(s, u[i]);
    out.radii.push_back(R);
    out.sup_near.push_back(s);
    out.v.push_back(std::move(u));
  }
  const auto& s = out.sup_near;
  const std::size_t k = s.size();
  out.limit_estimate = s.back();
  if (k >= 3) {
    const double d = s[k - 1] - 2.0 * s[k - 2] + s[k - 3];
    const double e = s[k - 1] - s[k - 2];
    if (std::abs(d) > 1e-300) out.limit_estimate = std::max(0.0, s[k - 1] - e * e / d);
  }
  return out;
}

}  // namespace mpak::solver
