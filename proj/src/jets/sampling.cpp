#include "mpak/jets/sampling.hpp"

#include <cmath>

namespace mpak::jets {

JetSampler::JetSampler(int m, std::uint64_t seed, SamplerOptions opts)
    : m_(m), opts_(opts), rng_(seed) {}

double JetSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Eigen::MatrixXd JetSampler::symmetric() {
  Eigen::MatrixXd A(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j) A(i, j) = A(j, i) = uniform(-opts_.scale, opts_.scale);
  return A;
}

Eigen::MatrixXd JetSampler::psd() {
  const int cols = std::uniform_int_distribution<int>(0, m_)(rng_);
  Eigen::MatrixXd B(m_, std::max(cols, 1));
  B.setZero();
  for (int c = 0; c < cols; ++c)
    for (int i = 0; i < m_; ++i) B(i, c) = uniform(-1.0, 1.0) * std::sqrt(opts_.scale);
  return B * B.transpose();
}

Eigen::VectorXd JetSampler::unit_vector() {
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(m_);
  do {
    for (int i = 0; i < m_; ++i) v(i) = n01(rng_);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

Jet JetSampler::jet() {
  const double radius = uniform(opts_.radius_min, opts_.radius_max);
  const double value = uniform(-opts_.scale, opts_.scale);
  const double t = std::exp(uniform(std::log(opts_.grad_min), std::log(opts_.grad_max)));
  Eigen::VectorXd p = unit_vector() * t;
  return Jet(radius, value, std::move(p), symmetric());
}

Jet JetSampler::shifted_jet() {
  Jet J = jet();
  J.hessian += uniform(-2.0 * opts_.scale, 2.0 * opts_.scale) *
               Eigen::MatrixXd::Identity(m_, m_);
  return J;
}

}  // namespace mpak::jets
