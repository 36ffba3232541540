#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Characteristic polynomial det(tI - A) by Faddeev-LeVerrier, ascending coefficients.
inline Eigen::VectorXd charpoly(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    M = A * M + c(n - k + 1) * I;
    c(n - k) = -(A * M).trace() / k;
  }
  return c;
}

// Roots of a polynomial (ascending coefficients) via its companion matrix.
inline std::vector<std::complex<double>> poly_roots(const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c(i) / c(n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

// sigma_k by explicit enumeration of k-subsets.
inline double sigma_brute(const std::vector<double>& x, int k) {
  const int m = static_cast<int>(x.size());
  double total = 0.0;
  std::vector<int> idx(k);
  std::function<void(int, int, double)> rec = [&](int start, int depth, double prod) {
    if (depth == k) {
      total += prod;
      return;
    }
    for (int i = start; i < m; ++i) rec(i + 1, depth + 1, prod * x[i]);
  };
  rec(0, 0, 1.0);
  return total;
}

inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Ascending Garding eigenvalues mu^{(k)}: the roots of sigma_j(lambda + t) for j < m are
// the critical points of those for j + 1 (derivative relation), so they interlace and each
// can be bracketed between consecutive roots of the previous stage.
inline std::vector<double> garding_interlacing(std::vector<double> lambda, int k) {
  const int m = static_cast<int>(lambda.size());
  std::vector<double> roots;
  for (double l : lambda) roots.push_back(-l);
  std::sort(roots.begin(), roots.end());
  for (int j = m - 1; j >= k; --j) {
    auto f = [&](double t) {
      std::vector<double> shifted(lambda);
      for (double& v : shifted) v += t;
      return sigma_brute(shifted, j);
    };
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
      const double a = roots[i];
      const double b = roots[i + 1];
      next.push_back(b - a <= 0.0 ? a : bisect(f, a, b));
    }
    roots = next;
  }
  std::vector<double> mu;
  for (double t : roots) mu.push_back(-t);
  std::sort(mu.begin(), mu.end());
  return mu;
}

// Projected SOR for u'' + (m-1) k(r) u' = 0 below an obstacle on a uniform grid,
// k = g'/g; boundary values are taken from u on entry.
inline int projected_sor(std::vector<double>& u, const std::vector<double>& obstacle, double r0,
                         double h, int m, const std::function<double(double)>& k,
                         double omega = 1.9, double tol = 1e-15, int max_sweeps = 200000) {
  const int n = static_cast<int>(u.size());
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double r = r0 + i * h;
      const double drift = (m - 1) * k(r) * h / 2.0;
      const double gs = ((1.0 - drift) * u[i - 1] + (1.0 + drift) * u[i + 1]) / 2.0;
      const double next = std::min(obstacle[i], u[i] + omega * (gs - u[i]));
      change = std::max(change, std::abs(next - u[i]));
      u[i] = next;
    }
    if (change < tol) return sweep;
  }
  return -1;
}

// Minimum of the discrete Dirichlet energy sum_i w_i (u_{i+1} - u_i)^2, w_i = g(mid)^{m-1} / h,
// over grid functions with u = 1 at r0 and 0 at r1: the Euler-Lagrange tridiagonal system
// solved by elimination. The sphere area factor is not included.
inline double quadratic_energy_capacity(const std::function<double(double)>& g, int m, double r0, double r1,
                                        int n) {
  const double h = (r1 - r0) / (n - 1);
  std::vector<double> w(n - 1);
  for (int i = 0; i + 1 < n; ++i) w[i] = std::pow(g(r0 + (i + 0.5) * h), m - 1) / h;
  const int k = n - 2;
  std::vector<double> a(k), b(k), c(k), d(k, 0.0), u(n, 0.0);
  for (int j = 0; j < k; ++j) {
    a[j] = -w[j];
    b[j] = w[j] + w[j + 1];
    c[j] = -w[j + 1];
  }
  d[0] = w[0];
  for (int j = 1; j < k; ++j) {
    const double f = a[j] / b[j - 1];
    b[j] -= f * c[j - 1];
    d[j] -= f * d[j - 1];
  }
  u[0] = 1.0;
  u[k] = d[k - 1] / b[k - 1];
  for (int j = k - 2; j >= 0; --j) u[j + 1] = (d[j] - c[j] * u[j + 2]) / b[j];
  double e = 0.0;
  for (int i = 0; i + 1 < n; ++i) e += w[i] * (u[i + 1] - u[i]) * (u[i + 1] - u[i]);
  return e;
}

}  // namespace oracle
