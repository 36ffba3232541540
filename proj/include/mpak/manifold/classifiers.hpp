#pragma once

#include <optional>

#include "mpak/expr/expr.hpp"
#include "mpak/manifold/divergence.hpp"
#include "mpak/manifold/model.hpp"
#include "mpak/manifold/verdict.hpp"

namespace mpak::manifold {

/// Sufficient test int^inf r / log vol B_r = inf. Never returns Fails.
Verdict stochastic_completeness_volume_test(const ModelManifold& M,
                                            const DivergencePolicy& policy = {});

struct OdeOptions {
  double r_cap = 100.0;
  double blowup = 1e30;
  double slope_margin = 0.1;  // bounded iff d log u' / d log r < -1 - margin at r_cap
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
};

/// Integrates u'' + (m-1)(g'/g) u' = f(u), u(r0) = 0, u'(r0) = delta (f in the variable u,
/// default f(u) = u). Fails with the bounded solution as witness when u stays bounded,
/// Holds when it blows up or keeps a non-integrable slope.
Verdict ahlfors_witness_ode(const ModelManifold& M, const std::optional<expr::Expr>& f,
                            double r0, double delta, OdeOptions opts = {});

}  // namespace mpak::manifold
