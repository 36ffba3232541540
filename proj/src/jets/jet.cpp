#include "mpak/jets/jet.hpp"

#include <string>

#include "mpak/core/error.hpp"
#include "mpak/jets/linalg.hpp"

namespace mpak::jets {

Jet::Jet(double radius, double value, Eigen::VectorXd gradient, Eigen::MatrixXd hessian)
    : radius(radius), value(value), gradient(std::move(gradient)), hessian(std::move(hessian)) {}

Jet Jet::radial(int m, double radius, double value, double dr, double d2, double tang) {
  Jet j;
  j.radius = radius;
  j.value = value;
  j.gradient = Eigen::VectorXd::Zero(m);
  j.gradient(0) = dr;
  j.hessian = Eigen::MatrixXd::Zero(m, m);
  j.hessian(0, 0) = d2;
  for (int i = 1; i < m; ++i) j.hessian(i, i) = tang;
  return j;
}

Jet Jet::negated() const { return Jet(radius, -value, -gradient, -hessian); }

Jet Jet::operator+(const Jet& other) const {
  return Jet(radius, value + other.value, gradient + other.gradient, hessian + other.hessian);
}

void Jet::validate() const {
  const auto m = gradient.size();
  if (m < 2) throw DomainError("jet dimension must be at least 2");
  if (hessian.rows() != m || hessian.cols() != m)
    throw DomainError("jet gradient has length " + std::to_string(m) + " but Hessian is " +
                      std::to_string(hessian.rows()) + "x" + std::to_string(hessian.cols()));
  if (symmetry_defect(hessian) > 1e-12)
    throw DomainError("jet Hessian is not symmetric (defect " +
                      std::to_string(symmetry_defect(hessian)) + ")");
}

}  // namespace mpak::jets
