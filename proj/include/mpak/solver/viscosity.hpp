#pragma once

#include <functional>
#include <vector>

#include "mpak/core/grid.hpp"
#include "mpak/jets/jet.hpp"
#include "mpak/jets/subequation.hpp"
#include "mpak/manifold/model.hpp"

namespace mpak::solver {

using jets::Jet;
using jets::Subequation;
using manifold::ModelManifold;

/// Radial jet from values at r - hl, r, r + hr: gradient (right - left) / (hl + hr),
/// Hessian diag(three-point second difference, (g'/g) * gradient repeated m-1 times).
Jet stencil_jet(const ModelManifold& M, double r, double hl, double hr, double left, double mid,
                double right);

/// Central-difference jet of u at interior node i.
Jet discrete_jet(const GridFunction& u, const ModelManifold& M, int i);

enum class Kink { None, Convex, Concave };

/// Convex (concave) kink: the one-sided slopes jump up (down) by more than
/// `ratio * max(1, |slopes|)`.
Kink kink_at(const GridFunction& u, int i, double ratio = 0.5);

struct Violation {
  int node;
  double radius;
  double defect;  // defining value at the discrete jet
};

/// Nodes whose discrete jet lies outside F. Convex kinks are exempt: no C^2 function
/// touches u from above there. `where` restricts the check to selected nodes.
std::vector<Violation> viscosity_subharmonic_check(const GridFunction& u, const Subequation& F,
                                                   const ModelManifold& M,
                                                   double tol = jets::kBoundaryEps,
                                                   const std::function<bool(int)>& where = {});

/// Largest u_i with F(jet) >= 0 given the neighbours, capped by the obstacle
/// (+inf for none). Throws NumericalError when no bracket exists and, for defining
/// functions independent of u_i, when the node is not a member.
double node_solve(const Subequation& F, const ModelManifold& M, const Grid& grid, int i,
                  double left, double right, double obstacle);

}  // namespace mpak::solver
