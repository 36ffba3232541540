#pragma once

#include <vector>

#include "mpak/core/grid.hpp"
#include "mpak/jets/subequation.hpp"
#include "mpak/manifold/model.hpp"
#include "mpak/manifold/verdict.hpp"

namespace mpak::solver {

using manifold::Verdict;

/// w(r) = -(r - r_K): Holds (an eikonal exhaustion) iff the model is complete,
/// Fails with the bounded witness otherwise.
Verdict eikonal_potential(const manifold::ModelManifold& M, double r_K);

/// Boundary maximum principle for u on its grid: Holds iff max over the two end
/// nodes of u^+ equals max u to 1e-10 * scale; Fails with the interior maximiser.
/// Throws NotApplicable unless u is finite, positive somewhere and discretely
/// H-subharmonic (within tol) where u > 0.
Verdict ahlfors_check(const jets::Subequation& H, const manifold::ModelManifold& M,
                      const GridFunction& u, double tol = jets::kBoundaryEps);

/// Limit version on U = (r_K, R_max) for u on truncations [r_K, R]: the only boundary
/// is r = r_K, so the property fails when sup u over the schedule settles strictly above
/// u^+(r_K). Each truncation is sampled on grid_n nodes and checked for H-subharmonicity
/// where u > 0 (NotApplicable otherwise, or when the suprema keep growing by more than
/// settle * (1 + |sup|) at the last step).
Verdict ahlfors_limit_check(const jets::Subequation& H, const manifold::ModelManifold& M,
                            const manifold::RadialFunction& u, double r_K,
                            const std::vector<double>& schedule, int grid_n = 2000,
                            double tol = 1e-6, double settle = 1e-3);

struct CapacitorSequence {
  std::vector<double> radii;    // R_j
  std::vector<double> sup_near;  // sup of v_j = 1 - u_j on [r_K, 2 r_K]
  std::vector<GridFunction> v;
  double limit_estimate = 0.0;  // Aitken extrapolation of sup_near
};

/// Infinity-capacitors u_j on [r_K, R_j] (1 at r_K, 0 at R_j) and v_j = 1 - u_j.
/// An empty schedule selects r_K 2^j (complete) or R_max - (R_max - r_K) 2^-j, j = 1..8.
CapacitorSequence infinity_capacitor_sequence(const manifold::ModelManifold& M, double r_K,
                                              std::vector<double> schedule = {},
                                              int grid_n = 200);

}  // namespace mpak::solver
