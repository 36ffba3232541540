#pragma once

#include <string>
#include <vector>

#include "mpak/manifold/model.hpp"
#include "mpak/manifold/quadrature.hpp"

namespace mpak::manifold {

/// Numerical proxy for deciding whether an improper integral is finite.
///
/// The integral is split at the horizons H_0 < H_1 < ...; with increments
/// D_k = int_{H_k}^{H_{k+1}} f, the last `slope_window` ratios D_{k+1}/D_k are compared
/// with the thresholds. Geometric decay (ratio <= converge_ratio) certifies a
/// convergent tail; ratios >= diverge_ratio (non-decaying increments on a geometric
/// horizon ladder, i.e. at least logarithmic growth) certify divergence.
struct DivergencePolicy {
  std::vector<double> horizons{1e2, 1e3, 1e4, 1e5, 1e6};
  int slope_window = 3;
  double diverge_ratio = 0.9;
  double converge_ratio = 0.5;

  void validate() const;
  /// Horizons for an interval starting at r0 and ending at r_max (possibly finite):
  /// finite ends get r_max - (r_max - r0) * 10^{-k}.
  std::vector<double> ladder(double r0, double r_max) const;
};

enum class Tail { Divergent, Convergent, Undecided };

std::string to_string(Tail t);

struct TailReport {
  Tail tail = Tail::Undecided;
  std::vector<double> horizons;
  std::vector<double> log_increments;  // log D_k
  std::vector<double> ratios;
  double log_partial = 0.0;             // log int_{r0}^{H_last} f
};

/// Classifies int_{r0}^{r_max} exp(log_f).
TailReport classify_tail(const LogIntegrand& log_f, double r0, double r_max,
                         const DivergencePolicy& policy);

/// Same decision from precomputed increments (log D_k).
Tail decide(const std::vector<double>& log_increments, const DivergencePolicy& policy,
            std::vector<double>* ratios = nullptr);

}  // namespace mpak::manifold
