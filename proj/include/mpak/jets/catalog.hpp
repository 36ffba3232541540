#pragma once

#include <string>
#include <vector>

#include "mpak/jets/subequation.hpp"

namespace mpak::jets {

/// Builds a catalog subequation of dimension m. Recognised names:
///   eikonal, eikonal_xi, dual_eikonal, dual_eikonal_xi,
///   sum_smallest_k_f, sum_largest_k_f, lambda_k_f, garding_branch,
///   pucci_plus, pucci_minus, quasilinear, quasilinear_normalized,
///   inf_laplacian_normalized
/// and the aliases laplace, sum_smallest_k, lambda_k, inf_laplacian.
/// Missing f defaults to 0, missing xi to -r, missing a to 1.
Subequation make_subeq(const std::string& name, const SubeqParams& params, int m);

std::vector<std::string> catalog_names();

/// Preset profiles.
expr::Expr f_linear(double c);
expr::Expr f_zero();
expr::Expr xi_linear(double c);
expr::Expr a_constant();
expr::Expr a_power(double q);
expr::Expr a_mean_curvature();
expr::Expr a_exp_square();

/// Throws ParameterError unless f(0) = 0 and f is odd and strictly increasing on a
/// sign-symmetric sample grid; xi likewise but strictly decreasing.
void validate_f(const expr::Expr& f);
void validate_xi(const expr::Expr& xi);
/// Throws ParameterError unless theta1 = a + t a' >= 0 and theta2 = a > 0 on samples t > 0.
void validate_a(const expr::Expr& a);

struct Theta {
  double theta1;
  double theta2;
};
/// Quasilinear eigenvalues at gradient norm t.
Theta quasilinear_theta(const expr::Expr& a, const expr::Expr& a_prime, double t);

}  // namespace mpak::jets
