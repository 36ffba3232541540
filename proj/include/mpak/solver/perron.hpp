#pragma once

#include <optional>
#include <string>

#include "mpak/core/grid.hpp"
#include "mpak/jets/subequation.hpp"
#include "mpak/manifold/model.hpp"

namespace mpak::solver {

/// Dirichlet problem for F cap {value <= obstacle} on a radial grid.
struct ObstacleProblem {
  jets::Subequation F;
  manifold::ModelManifold M;
  Grid grid;
  double left = 0.0;   // value at r0
  double right = 0.0;  // value at r1
  std::optional<GridFunction> obstacle;  // none: +inf

  double obstacle_at(int i) const;
  /// Throws ParameterError on grid mismatch or boundary values above the obstacle.
  void validate() const;
};

enum class SolveStatus { Converged, Stalled };

std::string to_string(SolveStatus s);

struct PerronOptions {
  int max_sweeps = 5000;
  double tol = 1e-10;     // sup-norm change of a full sweep
  bool backward = false;  // sweep from r1 to r0
  bool newton = true;     // semismooth Newton warm start before the sweeps
  int max_newton = 60;
};

struct PerronResult {
  GridFunction u;
  SolveStatus status = SolveStatus::Stalled;
  double residual = 0.0;  // last sweep change
  int sweeps = 0;
  int newton_iterations = 0;
  int contact_nodes = 0;  // interior nodes where u equals the obstacle
};

/// Maximal discrete F-subharmonic function below the obstacle with the given boundary
/// values: the fixed point of Gauss-Seidel node_solve sweeps. A semismooth Newton
/// iteration on min(g - u, h^2 F) = 0 supplies the starting point; the sweeps then run
/// until the sup-change drops below tol (Stalled when max_sweeps is reached).
PerronResult perron_obstacle_solve(const ObstacleProblem& P, const PerronOptions& opts = {});

}  // namespace mpak::solver
