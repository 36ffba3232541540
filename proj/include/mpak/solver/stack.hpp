#pragma once

#include <string>
#include <vector>

#include "mpak/core/grid.hpp"
#include "mpak/jets/subequation.hpp"
#include "mpak/manifold/model.hpp"
#include "mpak/solver/perron.hpp"

namespace mpak::solver {

struct StackOptions {
  double epsilon = 0.1;
  int max_levels = 3;
  int grid_n = 2000;
  bool geometric_grid = true;  // uniform in log r, so r_K stays resolved as R_j grows
  int max_extensions = 24;     // schedule indices tried per level
  double stall_change = 0.01;  // relative change of the level error counted as no progress
  /// Outer radii R_j; empty selects r_K 2^j (complete) or R_max - (R_max - r_K) 2^-j.
  std::vector<double> schedule;
  PerronOptions perron;
};

enum class StackStatus { Converged, Stalled, Diverged };

std::string to_string(StackStatus s);

struct StackAttempt {
  int j;
  double R;
  double delta;  // sup |u_j - w_i| on [r_K, R_i]
  bool lower_ok;  // (1 - 2^{-i-2}) h < u_j everywhere
};

struct StackLevel {
  int i;  // builds w_{i+1} from w_i
  int j = -1;
  double R = 0.0;
  double delta = 0.0;
  double reach_radius = 0.0;  // u = -i-1 from here on
  bool a = false, b = false, c = false;
  int violations = 0;
  std::vector<StackAttempt> attempts;
};

struct StackReport {
  StackStatus status = StackStatus::Diverged;
  std::vector<StackLevel> levels;
  std::vector<GridFunction> iterates;  // w_0, w_1, ...; each is extended by its last value
  GridFunction potential;
  std::string note;
};

/// Builds w_1 >= w_2 >= ... by the stacked obstacle problems: for level i the obstacle
/// w_i + lambda_j (lambda_j linear from 0 at r_K to -1 at R_{j-1}) on [r_K, R_j] with
/// boundary values 0 and -i-1, increasing j until condition (c) holds. Stalled when two
/// successive extensions change the level error by less than stall_change.
StackReport khasminskii_stack(const jets::Subequation& F, const manifold::ModelManifold& M,
                              double r_K, const manifold::RadialFunction& h,
                              const StackOptions& opts = {});

/// Minimax relative distance between w and the best multiple c * e on [a, b]
/// (e nonzero there): (max - min) / (max + min) of the ratios w / e.
double envelope_deviation(const GridFunction& w, const manifold::RadialFunction& e, double a, double b,
                          double* best_c = nullptr);

}  // namespace mpak::solver
