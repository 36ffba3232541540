#pragma once

#include <cstdint>

#include "mpak/manifold/model.hpp"

namespace mpak::manifold {

struct BrownianOptions {
  double r_start = 1.0;
  double T = 2.0;
  int n_paths = 10000;
  std::uint64_t seed = 1;
  double r_explode = 0.0;   // 0 selects max(1e3, 10 r_start)
  double eps_floor = 1e-4;  // reflecting barrier near the pole
  double dt = 1e-3;         // base step; shortened where the drift is large
  double peclet = 10.0;     // drift dominance b(R) R / 2 >= peclet at the exit radius
  int threads = 0;          // 0: hardware concurrency, capped by MPAK_THREADS
};

struct BrownianResult {
  double explosion_fraction = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int exploded = 0;
  int exits_without_certificate = 0;
  int overflow_paths = 0;
  int n_paths = 0;
  double r_explode = 0.0;
  double escape_time = 0.0;  // int_{r_explode} dr / b, +inf unless certified finite
  bool explosive() const { return ci_low > 0.0; }
};

/// Euler-Maruyama for dr = (m-1)(g'/g) dt + sqrt(2) dW with reflection at eps_floor.
/// An exit through r_explode at time t counts as explosion when the drift dominates there
/// (Peclet) and the drift alone reaches the end of the model by T (t + escape_time <= T).
/// Each path draws from its own stream seeded by (seed, path index), so results do not
/// depend on the thread count.
BrownianResult brownian_explosion_mc(const ModelManifold& M, BrownianOptions opts);

/// Wilson score interval at 95%.
void wilson_interval(int successes, int n, double& lo, double& hi);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mpak::manifold
