#pragma once

#include <Eigen/Dense>

namespace mpak::jets {

/// Point of the reduced 2-jet bundle: base radius, value r, gradient p, Hessian A.
struct Jet {
  double radius = 0.0;
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;

  Jet() = default;
  Jet(double radius, double value, Eigen::VectorXd gradient, Eigen::MatrixXd hessian);

  /// Jet of a radial function: gradient (dr, 0, ..., 0), Hessian diag(d2, tang, ..., tang).
  static Jet radial(int m, double radius, double value, double dr, double d2, double tang);

  int dim() const { return static_cast<int>(gradient.size()); }

  /// (r, p, A) -> (-r, -p, -A), radius unchanged.
  Jet negated() const;
  Jet operator+(const Jet& other) const;

  /// Throws DomainError on size mismatch, m < 2 or an asymmetric Hessian.
  void validate() const;
};

}  // namespace mpak::jets
