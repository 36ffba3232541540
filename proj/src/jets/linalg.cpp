#include "mpak/jets/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "mpak/core/error.hpp"

namespace mpak::jets {

namespace {

bool is_diagonal(const Eigen::MatrixXd& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (i != j && A(i, j) != 0.0) return false;
  return true;
}

void require_symmetric(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw DomainError("matrix is not square");
  const double defect = symmetry_defect(A);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (defect > 1e-12 * scale) {
    std::ostringstream os;
    os << "matrix is not symmetric: max |A - A^T| = " << defect;
    throw DomainError(os.str());
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double horner(const Eigen::VectorXd& c, double t) {
  double v = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) v = v * t + c(i);
  return v;
}

double horner_derivative(const Eigen::VectorXd& c, double t) {
  double v = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 1; --i) v = v * t + static_cast<double>(i) * c(i);
  return v;
}

// Divides c (ascending) by (t - root), dropping the remainder.
Eigen::VectorXd deflate(const Eigen::VectorXd& c, double root) {
  const Eigen::Index n = c.size() - 1;
  Eigen::VectorXd q(n);
  double carry = c(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    q(i) = carry;
    carry = c(i) + carry * root;
  }
  return q;
}

std::vector<double> companion_roots(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size() - 1;
  if (n <= 0) return {};
  if (n == 1) return {-c(0) / c(1)};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) C(i, n - 1) = -c(i) / c(n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) {
      std::ostringstream os;
      os << "Garding root has imaginary part " << z.imag() << "; hyperbolic root finder failed";
      throw NumericalError(os.str());
    }
    out.push_back(z.real());
  }
  return out;
}

}  // namespace

double symmetry_defect(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) return std::numeric_limits<double>::infinity();
  if (A.size() == 0) return 0.0;
  return (A - A.transpose()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& A) {
  require_symmetric(A);
  if (is_diagonal(A)) {
    Eigen::VectorXd d = A.diagonal();
    std::sort(d.data(), d.data() + d.size());
    return d;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EigenDecomposition eigen_decomposition(const Eigen::MatrixXd& A) {
  require_symmetric(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  return {es.eigenvalues(), es.eigenvectors()};
}

double sigma_k(const Eigen::VectorXd& lambda, int k) {
  const int m = static_cast<int>(lambda.size());
  if (k < 1 || k > m)
    throw ParameterError("sigma_k needs 1 <= k <= " + std::to_string(m) + ", got " +
                         std::to_string(k));
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = std::min(i + 1, k); j >= 1; --j) e[j] += lambda(i) * e[j - 1];
  return e[k];
}

Eigen::VectorXd garding_polynomial(const Eigen::VectorXd& lambda, int k) {
  const int m = static_cast<int>(lambda.size());
  if (k < 1 || k > m) throw ParameterError("Garding branch needs 1 <= k <= m");
  Eigen::VectorXd c(k + 1);
  for (int i = 0; i <= k; ++i) {
    const double s = i == 0 ? 1.0 : sigma_k(lambda, i);
    c(k - i) = binomial(m - i, k - i) * s;
  }
  return c;
}

Eigen::VectorXd garding_from_eigenvalues(const Eigen::VectorXd& lambda_in, int k) {
  const int m = static_cast<int>(lambda_in.size());
  if (k < 1 || k > m)
    throw ParameterError("Garding branch needs 1 <= k <= " + std::to_string(m) + ", got " +
                         std::to_string(k));
  Eigen::VectorXd lambda = lambda_in;
  std::sort(lambda.data(), lambda.data() + m);
  if (k == m) return lambda;
  if (k == 1) return Eigen::VectorXd::Constant(1, lambda.mean());

  const double centre = lambda.mean();
  Eigen::VectorXd x = lambda.array() - centre;
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Eigen::VectorXd::Constant(k, centre);
  x /= scale;

  // sigma_k(x + t1) is proportional to the (m-k)-th derivative of prod(x_i + t), so an
  // eigenvalue of multiplicity r > m-k is a root of multiplicity r-(m-k).
  std::vector<double> roots;
  Eigen::VectorXd poly = garding_polynomial(x, k);
  const double cluster_tol = 1e-10;
  for (int i = 0; i < m;) {
    int j = i + 1;
    while (j < m && x(j) - x(i) <= cluster_tol) ++j;
    const int mult = j - i;
    if (mult > m - k) {
      const double root = -x.segment(i, mult).mean();
      for (int r = 0; r < mult - (m - k); ++r) {
        roots.push_back(root);
        poly = deflate(poly, root);
      }
    }
    i = j;
  }
  std::vector<double> rest = companion_roots(poly);

  const Eigen::VectorXd full = garding_polynomial(x, k);
  for (double& t : rest) {
    for (int it = 0; it < 8; ++it) {
      const double d = horner_derivative(full, t);
      if (d == 0.0) break;
      const double step = horner(full, t) / d;
      const double next = t - step;
      if (!(std::abs(horner(full, next)) < std::abs(horner(full, t)))) break;
      t = next;
      if (std::abs(step) <= 1e-16) break;
    }
  }
  roots.insert(roots.end(), rest.begin(), rest.end());

  Eigen::VectorXd mu(k);
  for (int i = 0; i < k; ++i) mu(i) = -roots[static_cast<std::size_t>(i)] * scale + centre;
  std::sort(mu.data(), mu.data() + k);
  return mu;
}

Eigen::VectorXd garding_eigenvalues(const Eigen::MatrixXd& A, int k) {
  return garding_from_eigenvalues(eigenvalues(A), k);
}

double pucci_from_eigenvalues(const Eigen::VectorXd& lambda, double lo, double hi,
                              PucciSign sign) {
  if (!(lo > 0.0) || !(lo <= hi))
    throw ParameterError("Pucci operator needs 0 < lambda <= Lambda");
  double neg = 0.0;
  double pos = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) (lambda(i) < 0.0 ? neg : pos) += lambda(i);
  return sign == PucciSign::Plus ? lo * neg + hi * pos : hi * neg + lo * pos;
}

double pucci(const Eigen::MatrixXd& A, double lo, double hi, PucciSign sign) {
  return pucci_from_eigenvalues(eigenvalues(A), lo, hi, sign);
}

double sum_smallest(const Eigen::VectorXd& sorted, int k) { return sorted.head(k).sum(); }
double sum_largest(const Eigen::VectorXd& sorted, int k) { return sorted.tail(k).sum(); }

}  // namespace mpak::jets
