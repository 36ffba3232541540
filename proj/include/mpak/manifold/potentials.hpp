#pragma once

#include "mpak/expr/expr.hpp"
#include "mpak/manifold/divergence.hpp"
#include "mpak/manifold/model.hpp"
#include "mpak/manifold/verdict.hpp"

namespace mpak::manifold {

struct CapacityResult {
  double value = 0.0;                // with the omega_{m-1} factor
  double value_without_omega = 0.0;
  double log_integral = 0.0;         // log int_{r0}^{r1} g^{-(m-1)/(q-1)}
  double max_flux_defect = 0.0;      // relative spread of g^{m-1}|u'|^{q-1} at sample radii
  RadialFunction capacitor;          // 1 at r0, 0 at r1, q-harmonic
};

/// q-capacity of the condenser (B_{r0}, B_{r1}) with its radial capacitor.
CapacityResult q_capacity(const ModelManifold& M, double r0, double r1, double q);

/// Holds iff int^{R_max} g^{-(m-1)/(q-1)} diverges; Fails on certified convergence.
Verdict parabolicity_test(const ModelManifold& M, double q, const DivergencePolicy& policy = {},
                          double r0 = 1.0);

/// Harmonic w = int_{r0}^r g^{1-m}; Holds iff w is an exhaustion.
Verdict evans_potential(const ModelManifold& M, double r0, const DivergencePolicy& policy = {});

/// Infimal Lipschitz constant of functions 1 on B_{r0} and 0 outside B_{r1}; r1 may be +inf.
double infinity_capacity(const ModelManifold& M, double r0, double r1);

enum class Flavor { Omori, Yau };

/// Checks |w'| <= G(w) and either Delta w <= G(w) (yau) or the largest Hessian eigenvalue
/// <= G(w) (omori) on a geometric sample grid from w.lo(), plus exhaustion of w and
/// divergence of int ds / G(s). G is an expression in `t`.
Verdict khasminskii_radial_check(const ModelManifold& M, const RadialFunction& w,
                                 const expr::Expr& G, Flavor flavor,
                                 const DivergencePolicy& policy = {});

/// For negative radial w on [w.lo(), w.hi()]: Hessian eigenvalues >= w, |w'| <= -w,
/// and w -> -inf (exhaustion).
Verdict hessian_khasminskii_check(const ModelManifold& M, const RadialFunction& w,
                                  int samples = 400);

struct PolarResult {
  RadialFunction psi;
  double max_defect = 0.0;  // max |sum of p smallest Hessian eigenvalues| / r^{-p}
  bool certified = false;
  bool tends_to_minus_infinity = false;
};

/// Polar kernel on R^m: log r (p = 2) or -r^{2-p}, certified M_p-harmonic.
PolarResult polar_potential(const ModelManifold& M, double p);

}  // namespace mpak::manifold
