#pragma once

#include <Eigen/Dense>

namespace mpak::jets {

/// max |A - A^T| entry.
double symmetry_defect(const Eigen::MatrixXd& A);

/// Ascending eigenvalues of a symmetric matrix. Rejects asymmetric input
/// (defect above 1e-12 relative to max(1, |A|_max)) with DomainError.
Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& A);

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};
EigenDecomposition eigen_decomposition(const Eigen::MatrixXd& A);

/// Elementary symmetric polynomial of degree k in the entries of lambda.
double sigma_k(const Eigen::VectorXd& lambda, int k);

/// Coefficients c_0..c_k (ascending powers of t) of t -> sigma_k(lambda + t*1).
Eigen::VectorXd garding_polynomial(const Eigen::VectorXd& lambda, int k);

/// Ascending mu_1 <= ... <= mu_k: negatives of the roots of sigma_k(lambda(A) + t*1).
Eigen::VectorXd garding_eigenvalues(const Eigen::MatrixXd& A, int k);
Eigen::VectorXd garding_from_eigenvalues(const Eigen::VectorXd& lambda, int k);

enum class PucciSign { Plus, Minus };

/// Plus: lo tr(A^-) + hi tr(A^+); Minus: hi tr(A^-) + lo tr(A^+).
double pucci(const Eigen::MatrixXd& A, double lo, double hi, PucciSign sign);
double pucci_from_eigenvalues(const Eigen::VectorXd& lambda, double lo, double hi, PucciSign sign);

/// Sum of the k smallest / largest entries of an ascending list.
double sum_smallest(const Eigen::VectorXd& sorted, int k);
double sum_largest(const Eigen::VectorXd& sorted, int k);

}  // namespace mpak::jets
