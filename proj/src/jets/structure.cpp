#include "mpak/jets/structure.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mpak/core/error.hpp"
#include "mpak/jets/linalg.hpp"

namespace mpak::jets {

namespace {

std::string describe(const Jet& J) {
  std::ostringstream os;
  os.precision(6);
  os << "radius=" << J.radius << " value=" << J.value << " p=[" << J.gradient.transpose()
     << "] A=[" << J.hessian.reshaped().transpose() << "]";
  return os.str();
}

bool inside(double v) { return v > kBoundaryEps; }
bool outside(double v) { return v < -kBoundaryEps; }
bool near_boundary(double v) { return !(std::abs(v) > kBoundaryEps); }

void record(SampleReport& rep, const std::string& what) {
  if (rep.violations++ == 0) rep.first_violation = what;
}

// Membership of F and G must agree wherever both are clear of the boundary band.
void compare_at(const Subequation& F, const Subequation& G, const Jet& J, SampleReport& rep) {
  const double a = F.eval_unchecked(J);
  const double b = G.eval_unchecked(J);
  ++rep.samples;
  if (near_boundary(a) || near_boundary(b)) {
    ++rep.skipped;
    return;
  }
  if ((a > 0) != (b > 0))
    record(rep, F.name() + "=" + std::to_string(a) + " vs " + G.name() + "=" +
                    std::to_string(b) + " at " + describe(J));
}

template <class Accept, class Test>
SampleReport rejection_loop(int m, int n_samples, std::uint64_t seed, SamplerOptions opts,
                            Accept accept, Test test) {
  SampleReport rep;
  JetSampler s(m, seed, opts);
  const long budget = 200L * n_samples;
  long attempts = 0;
  while (rep.samples < n_samples) {
    if (++attempts > budget) {
      rep.inconclusive = true;
      break;
    }
    Jet J = (attempts % 2 == 0) ? s.jet() : s.shifted_jet();
    if (!accept(J)) continue;
    ++rep.samples;
    test(J, s, rep);
  }
  return rep;
}

}  // namespace

SampleReport check_positivity(const Subequation& F, int n_samples, std::uint64_t seed,
                              SamplerOptions opts) {
  return rejection_loop(
      F.dim(), n_samples, seed, opts, [&](const Jet& J) { return inside(F.eval_unchecked(J)); },
      [&](const Jet& J, JetSampler& s, SampleReport& rep) {
        Jet K = J;
        K.hessian += s.psd();
        if (const double v = F.eval_unchecked(K); !(v >= -kBoundaryEps))
          record(rep, "A+P left " + F.name() + " (" + std::to_string(v) + ") at " + describe(J));
      });
}

SampleReport check_negativity(const Subequation& F, int n_samples, std::uint64_t seed,
                              SamplerOptions opts) {
  return rejection_loop(
      F.dim(), n_samples, seed, opts, [&](const Jet& J) { return inside(F.eval_unchecked(J)); },
      [&](const Jet& J, JetSampler& s, SampleReport& rep) {
        Jet K = J;
        K.value -= s.uniform(0.0, 2.0 * s.options().scale);
        if (const double v = F.eval_unchecked(K); !(v >= -kBoundaryEps))
          record(rep, "lowering r left " + F.name() + " (" + std::to_string(v) + ") at " +
                          describe(J));
      });
}

DualityReport duality_suite(const Subequation& F, const Subequation& G, int n_samples,
                            std::uint64_t seed, SamplerOptions opts) {
  if (F.dim() != G.dim()) throw DomainError("duality suite needs equal dimensions");
  const Subequation FF = dual(dual(F));
  const Subequation lhs = dual(intersection(F, G));
  const Subequation rhs = union_of(dual(F), dual(G));
  DualityReport rep;
  JetSampler s(F.dim(), seed, opts);
  for (int i = 0; i < n_samples; ++i) {
    const Jet J = (i % 2 == 0) ? s.jet() : s.shifted_jet();
    compare_at(FF, F, J, rep.involution);
    compare_at(lhs, rhs, J, rep.de_morgan);
  }
  return rep;
}

SampleReport compare_membership(const Subequation& F, const Subequation& G, int n_samples,
                                 std::uint64_t seed, SamplerOptions opts) {
  if (F.dim() != G.dim()) throw DomainError("membership comparison needs equal dimensions");
  SampleReport rep;
  JetSampler s(F.dim(), seed, opts);
  for (int i = 0; i < n_samples; ++i) compare_at(F, G, (i % 2 == 0) ? s.jet() : s.shifted_jet(), rep);
  return rep;
}

std::optional<Subequation> closed_form_dual(const Subequation& F) {
  if (F.known_dual().empty()) return std::nullopt;
  return make_subeq(F.known_dual(), F.dual_params(), F.dim());
}

void require_hessian_only(const Subequation& F, int n_samples, std::uint64_t seed) {
  JetSampler s(F.dim(), seed, {});
  for (int i = 0; i < n_samples; ++i) {
    const Jet J = s.shifted_jet();
    Jet bare = J;
    bare.value = 0.0;
    bare.gradient.setZero();
    const double a = F.eval_unchecked(J);
    const double b = F.eval_unchecked(bare);
    if (!(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b))))
      throw ParameterError("'" + F.name() + "' depends on (r, p): " + std::to_string(a) +
                           " vs " + std::to_string(b) + " at " + describe(J));
  }
}

double riesz_characteristic(const Subequation& F, double tol, double cap) {
  require_hessian_only(F);
  const int m = F.dim();
  auto member = [&](double t) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
    A(0, 0) -= t;
    return F.contains(Jet(0.0, 0.0, Eigen::VectorXd::Zero(m), A));
  };
  if (!member(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (member(hi)) {
    lo = hi;
    if (hi >= cap) return std::numeric_limits<double>::infinity();
    hi = std::min(2.0 * hi, cap);
  }
  while (hi - lo > tol * 0.5) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MonotonicityReport monotonicity_check(const Subequation& F, const Subequation& M, int n_samples,
                                      std::uint64_t seed, SamplerOptions opts) {
  if (F.dim() != M.dim()) throw DomainError("monotonicity check needs equal dimensions");
  MonotonicityReport rep;
  JetSampler s(F.dim(), seed, opts);
  const long budget = 200L * n_samples;

  auto draw = [&](const Subequation& S, long& attempts) -> std::optional<Jet> {
    while (attempts++ < budget) {
      Jet J = (attempts % 2 == 0) ? s.jet() : s.shifted_jet();
      if (inside(S.eval_unchecked(J))) return J;
    }
    return std::nullopt;
  };

  long attempts = 0;
  const int cone_samples = std::max(50, n_samples / 10);
  for (int i = 0; i < cone_samples; ++i) {
    auto a = draw(M, attempts);
    auto b = draw(M, attempts);
    if (!a || !b) {
      rep.inconclusive = true;
      return rep;
    }
    b->radius = a->radius;
    Jet mid = *a + *b;
    Jet scaled = *a;
    const double t = s.uniform(0.01, 100.0);
    scaled.value *= t;
    scaled.gradient *= t;
    scaled.hessian *= t;
    if (outside(M.eval_unchecked(mid)) || outside(M.eval_unchecked(scaled)))
      throw ParameterError("'" + M.name() + "' fails the sampled convex-cone check at " +
                           describe(*a));
  }

  attempts = 0;
  while (rep.samples < n_samples) {
    auto j1 = draw(F, attempts);
    auto j2 = draw(M, attempts);
    if (!j1 || !j2) {
      rep.inconclusive = true;
      return rep;
    }
    ++rep.samples;
    j2->radius = j1->radius;
    if (outside(F.eval_unchecked(*j1 + *j2))) {
      rep.counterexample = std::make_pair(*j1, *j2);
      return rep;
    }
  }
  rep.holds_on_samples = true;
  return rep;
}

SampleReport branch_equivalence_check(int k, int m, int n_samples, std::uint64_t seed,
                                      SamplerOptions opts) {
  if (k < 1 || k > m) throw ParameterError("branch check needs 1 <= k <= m");
  SampleReport rep;
  JetSampler s(m, seed, opts);
  for (int i = 0; i < n_samples; ++i) {
    Eigen::MatrixXd A = s.symmetric();
    A += s.uniform(-2.0 * opts.scale, 2.0 * opts.scale) * Eigen::MatrixXd::Identity(m, m);
    const Eigen::VectorXd lam = eigenvalues(A);
    const double mu1 = garding_from_eigenvalues(lam, k)(0);
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    bool all_nonneg = true;
    bool near = near_boundary(mu1);
    for (int d = 1; d <= k; ++d) {
      const double sd = sigma_k(lam, d);
      if (std::abs(sd) <= kBoundaryEps * std::pow(scale, d)) near = true;
      if (sd < 0) all_nonneg = false;
    }
    ++rep.samples;
    if (near) {
      ++rep.skipped;
      continue;
    }
    if ((mu1 > 0) != all_nonneg) {
      std::ostringstream os;
      os << "mu_1=" << mu1 << " but sigma_1..sigma_k nonnegative=" << all_nonneg
         << " for eigenvalues [" << lam.transpose() << "]";
      record(rep, os.str());
    }
  }
  return rep;
}

}  // namespace mpak::jets
