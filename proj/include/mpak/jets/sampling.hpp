#pragma once

#include <cstdint>
#include <random>

#include "mpak/jets/jet.hpp"

namespace mpak::jets {

struct SamplerOptions {
  double scale = 4.0;        // Hessian entries and values uniform in [-scale, scale]
  double grad_min = 1e-3;    // |p| log-uniform in [grad_min, grad_max]
  double grad_max = 1e3;
  double radius_min = 0.1;
  double radius_max = 10.0;
};

/// Seeded random jets. Deterministic for a fixed (m, seed, options).
class JetSampler {
 public:
  JetSampler(int m, std::uint64_t seed, SamplerOptions opts = {});

  Jet jet();
  /// Jet whose Hessian is shifted by a uniform multiple of the identity; reaches
  /// cone-like sets (e.g. {lambda_1 >= 0}) that the plain law rarely hits.
  Jet shifted_jet();
  Eigen::MatrixXd symmetric();
  /// B B^T with B having a random number of columns (rank 0..m).
  Eigen::MatrixXd psd();
  Eigen::VectorXd unit_vector();
  double uniform(double lo, double hi);

  int dim() const { return m_; }
  const SamplerOptions& options() const { return opts_; }

 private:
  int m_;
  SamplerOptions opts_;
  std::mt19937_64 rng_;
};

}  // namespace mpak::jets
