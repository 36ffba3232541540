#pragma once

#include <functional>
#include <vector>

#include "mpak/expr/expr.hpp"

namespace mpak::manifold {

using expr::LogValue;

/// log f for a nonnegative integrand (-inf where f = 0).
using LogIntegrand = std::function<double(double)>;

/// log of the integral of exp(log_f) over [a, b] (a may be 0, b finite). Panels are
/// refined geometrically toward both ends and toward 0, each panel integrated by
/// adaptive Gauss-Kronrod after factoring out its largest magnitude, so integrands
/// far outside double range are handled.
double log_integral(const LogIntegrand& log_f, double a, double b, double rel_tol = 1e-11);

/// Values log(int_{x_0}^{x_i} f) at ascending points x_0 < x_1 < ... (first entry -inf).
/// Each gap is a single adaptive panel, so the points should be reasonably dense.
std::vector<double> log_cumulative_integral(const LogIntegrand& log_f,
                                            const std::vector<double>& xs,
                                            double rel_tol = 1e-11);

/// log(exp(a) + exp(b)).
double log_add(double a, double b);

}  // namespace mpak::manifold
