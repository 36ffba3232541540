#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "mpak/jets/catalog.hpp"
#include "mpak/jets/sampling.hpp"
#include "mpak/jets/subequation.hpp"

namespace mpak::jets {

/// Outcome of a sampled property check. Jets within boundary_eps of a membership
/// boundary are skipped rather than counted.
struct SampleReport {
  int samples = 0;
  int violations = 0;
  int skipped = 0;
  bool inconclusive = false;  // sampler could not reach the required sets
  std::string first_violation;

  bool ok() const { return !inconclusive && violations == 0; }
};

/// Positivity: J in F and P >= 0 imply J + (0, 0, P) in F.
SampleReport check_positivity(const Subequation& F, int n_samples, std::uint64_t seed,
                              SamplerOptions opts = {});
/// Negativity: J in F and s <= value(J) imply (s, p, A) in F.
SampleReport check_negativity(const Subequation& F, int n_samples, std::uint64_t seed,
                              SamplerOptions opts = {});

struct DualityReport {
  SampleReport involution;  // dual(dual F) = F
  SampleReport de_morgan;   // dual(F cap G) = dual F cup dual G
  bool ok() const { return involution.ok() && de_morgan.ok(); }
};

DualityReport duality_suite(const Subequation& F, const Subequation& G, int n_samples,
                            std::uint64_t seed, SamplerOptions opts = {});

/// Membership of dual(F) against an independently constructed closed form.
SampleReport compare_membership(const Subequation& F, const Subequation& G, int n_samples,
                                std::uint64_t seed, SamplerOptions opts = {});

/// Closed-form dual from the catalog, when F carries one.
std::optional<Subequation> closed_form_dual(const Subequation& F);

/// Sampled check that F depends on the Hessian only. Throws ParameterError otherwise.
void require_hessian_only(const Subequation& F, int n_samples = 200, std::uint64_t seed = 7);

/// sup{t > 0 : (0, 0, I - t Pi_{e1}) in F}, bisection to `tol`; +inf past `cap`.
double riesz_characteristic(const Subequation& F, double tol = 1e-6, double cap = 1e6);

struct MonotonicityReport {
  bool holds_on_samples = false;
  bool inconclusive = false;
  int samples = 0;
  std::optional<std::pair<Jet, Jet>> counterexample;
};

/// Checks F + M subset F on sampled pairs. Throws ParameterError if M fails the
/// sampled convex-cone check.
MonotonicityReport monotonicity_check(const Subequation& F, const Subequation& M, int n_samples,
                                      std::uint64_t seed, SamplerOptions opts = {});

/// mu_1^{(k)}(A) >= 0 iff sigma_1(A) >= 0, ..., sigma_k(A) >= 0 on sampled A.
SampleReport branch_equivalence_check(int k, int m, int n_samples, std::uint64_t seed,
                                      SamplerOptions opts = {});

}  // namespace mpak::jets
