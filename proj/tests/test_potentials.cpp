#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "mpak/core/error.hpp"
#include "mpak/expr/expr.hpp"
#include "mpak/manifold/potentials.hpp"
#include "oracles.hpp"

using namespace mpak;
using namespace mpak::manifold;
using std::numbers::pi;

namespace {

// Discrete q-energy of piecewise-linear u on n nodes with midpoint weights g^{m-1}:
// E(u) = omega * sum_i w_i |u_{i+1}-u_i|^q h^{1-q}. With sum of increments fixed to -1,
// Hoelder gives the minimum (sum_i (w_i h^{1-q})^{-1/(q-1)})^{1-q}.
double discrete_capacity_holder(const ModelManifold& M, double r0, double r1, double q, int n) {
  const double h = (r1 - r0) / (n - 1);
  double s = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double w = std::pow(M.g(r0 + (i + 0.5) * h), M.dim() - 1) * std::pow(h, 1 - q);
    s += std::pow(w, -1.0 / (q - 1));
  }
  return omega(M.dim() - 1) * std::pow(s, 1 - q);
}

double discrete_capacity_tridiagonal(const ModelManifold& M, double r0, double r1, int n) {
  return omega(M.dim() - 1) * oracle::quadratic_energy_capacity([&](double r) { return M.g(r); }, M.dim(), r0, r1, n);
}

// min over grid functions (1 at r0, 0 at r1) of max |u_{i+1} - u_i| / h, by bisection on the
// Lipschitz bound L: feasible iff the steepest admissible descent reaches 0 by r1.
double discrete_infinity_capacity(double r0, double r1, int n) {
  const double h = (r1 - r0) / (n - 1);
  double lo = 0.0, hi = 1e6;
  for (int it = 0; it < 200; ++it) {
    const double L = 0.5 * (lo + hi);
    double u = 1.0;
    for (int i = 0; i + 1 < n; ++i) u = std::max(0.0, u - L * h);
    (u <= 0.0 ? hi : lo) = L;
  }
  return hi;
}

ModelManifold custom(int m, const char* g, double r_max = kInf) {
  return ModelManifold(m, expr::parse(g), r_max);
}

}  // namespace

TEST(Capacity, EuclideanAnnuli) {
  const auto R3 = ModelManifold::euclidean(3);
  const auto c3 = q_capacity(R3, 1.0, 2.0, 2.0);
  EXPECT_NEAR(c3.value / (8 * pi), 1.0, 1e-6);
  EXPECT_NEAR(c3.value_without_omega, 2.0, 2e-6);
  EXPECT_LT(c3.max_flux_defect, 1e-6);
  const auto c2 = q_capacity(ModelManifold::euclidean(2), 1.0, 2.0, 2.0);
  EXPECT_NEAR(c2.value / (2 * pi / std::log(2.0)), 1.0, 1e-6);
  // capacitor: 1 at r0, 0 at r1, equals (1/r - 1/2) / (1 - 1/2) on R^3
  for (double r : {1.0, 1.25, 1.5, 2.0}) EXPECT_NEAR(c3.capacitor(r), 2.0 / r - 1.0, 1e-9);
}

TEST(Capacity, DiscreteEnergyOracle) {
  const auto R3 = ModelManifold::euclidean(3);
  const auto R2 = ModelManifold::euclidean(2);
  for (const auto* M : {&R3, &R2}) {
    const double exact = q_capacity(*M, 1.0, 2.0, 2.0).value;
    const double tri = discrete_capacity_tridiagonal(*M, 1.0, 2.0, 400);
    const double hol = discrete_capacity_holder(*M, 1.0, 2.0, 2.0, 400);
    EXPECT_NEAR(tri / exact, 1.0, 1e-2);
    EXPECT_NEAR(hol / tri, 1.0, 1e-10);
  }
  const auto H3 = ModelManifold::hyperbolic(3);
  for (double q : {1.5, 2.0, 3.0, 4.5}) {
    const double exact = q_capacity(H3, 0.5, 2.0, q).value;
    EXPECT_NEAR(discrete_capacity_holder(H3, 0.5, 2.0, q, 400) / exact, 1.0, 1e-2) << q;
  }
}

TEST(Capacity, MonotoneInOuterRadiusAndValidated) {
  const auto M = custom(3, "r + r^3/6");
  double prev = kInf;
  for (double r1 : {1.5, 2.0, 4.0, 8.0}) {
    const double c = q_capacity(M, 1.0, r1, 2.5).value;
    EXPECT_LT(c, prev);
    prev = c;
  }
  EXPECT_THROW(q_capacity(M, 1.0, 2.0, 1.0), ParameterError);
  EXPECT_THROW(q_capacity(M, 2.0, 1.0, 2.0), ParameterError);
  EXPECT_THROW(q_capacity(custom(2, "r", 3.0), 1.0, 3.0, 2.0), ParameterError);
}

TEST(Capacity, PuncturedFamilyDecaysLikeLogRate) {
  const auto R2 = ModelManifold::euclidean(2);
  for (double eps : {1e-1, 1e-3, 1e-6, 1e-9, 1e-64, 1e-300}) {
    const double c = q_capacity(R2, eps, 1.0, 2.0).value;
    EXPECT_NEAR(c / (2 * pi / std::log(1.0 / eps)), 1.0, 1e-6);
  }
}

TEST(Capacity, Infinity) {
  const auto R2 = ModelManifold::euclidean(2);
  EXPECT_DOUBLE_EQ(infinity_capacity(R2, 1.0, 3.0), 0.5);
  EXPECT_NEAR(discrete_infinity_capacity(1.0, 3.0, 201), 0.5, 1e-9);
  EXPECT_EQ(infinity_capacity(R2, 1.0, kInf), 0.0);
  const auto B = custom(2, "r*(5-r)", 5.0);
  EXPECT_DOUBLE_EQ(infinity_capacity(B, 1.0, 5.0), 0.25);
  EXPECT_THROW(infinity_capacity(B, 1.0, 6.0), ParameterError);
}

TEST(Parabolicity, TruthTable) {
  EXPECT_EQ(parabolicity_test(ModelManifold::euclidean(2), 2.0).status, Status::Holds);
  EXPECT_EQ(parabolicity_test(ModelManifold::euclidean(3), 2.0).status, Status::Fails);
  EXPECT_EQ(parabolicity_test(ModelManifold::euclidean(3), 3.0).status, Status::Holds);
  EXPECT_EQ(parabolicity_test(ModelManifold::euclidean(3), 4.0).status, Status::Holds);
  EXPECT_EQ(parabolicity_test(ModelManifold::hyperbolic(3), 2.0).status, Status::Fails);
  EXPECT_EQ(parabolicity_test(ModelManifold::hyperbolic(2), 2.0).status, Status::Fails);
  // finite R_max: int g^{-1} up to 5 converges
  EXPECT_EQ(parabolicity_test(custom(2, "r", 5.0), 2.0).status, Status::Fails);
  EXPECT_THROW(parabolicity_test(ModelManifold::euclidean(2), 1.0), ParameterError);
}

TEST(Parabolicity, CapacityVanishesExactlyWhenParabolic) {
  for (const auto& M : {ModelManifold::euclidean(2), ModelManifold::euclidean(3),
                        ModelManifold::hyperbolic(2)}) {
    const bool parabolic = parabolicity_test(M, 2.0).status == Status::Holds;
    const double far = q_capacity(M, 1.0, 1e20, 2.0).value;
    const double near = q_capacity(M, 1.0, 1e3, 2.0).value;
    if (parabolic) {
      EXPECT_LT(far, 0.25 * near);
    } else {
      EXPECT_GT(far, 0.9 * near);
    }
  }
}

TEST(Evans, AgreesWithParabolicityAndIsHarmonic) {
  for (const auto& M : {ModelManifold::euclidean(2), ModelManifold::euclidean(3),
                        ModelManifold::euclidean(5), ModelManifold::hyperbolic(2),
                        ModelManifold::hyperbolic(3), custom(2, "r + r^2")}) {
    const auto v = evans_potential(M, 1.0);
    EXPECT_EQ(v.status, parabolicity_test(M, 2.0).status) << M.spec();
    EXPECT_LT(v.diagnostics.at("harmonic_defect"), 1e-8) << M.spec();
    ASSERT_TRUE(v.witness);
    EXPECT_NEAR((*v.witness)(1.0), 0.0, 1e-15);
  }
  const auto w2 = *evans_potential(ModelManifold::euclidean(2), 1.0).witness;
  EXPECT_NEAR(w2(10.0), std::log(10.0), 1e-10);
  const auto w3 = *evans_potential(ModelManifold::euclidean(3), 1.0).witness;
  EXPECT_NEAR(w3(4.0), 1.0 - 0.25, 1e-10);
}

TEST(Khasminskii, RadialChecks) {
  const auto w = RadialFunction::from_expr(expr::parse("log(1+r)"), 1.0);
  const auto G = expr::parse("4*(1+t)", "t");
  for (int m : {2, 3, 5})
    EXPECT_EQ(khasminskii_radial_check(ModelManifold::euclidean(m), w, G, Flavor::Yau).status,
              Status::Holds);
  EXPECT_EQ(khasminskii_radial_check(ModelManifold::hyperbolic(3), w, G, Flavor::Yau).status,
            Status::Holds);
  EXPECT_EQ(khasminskii_radial_check(ModelManifold::hyperbolic(3), w, G, Flavor::Omori).status,
            Status::Holds);
  const auto bad = khasminskii_radial_check(custom(2, "exp(r^3)"), w, G, Flavor::Yau);
  EXPECT_EQ(bad.status, Status::Fails);
  EXPECT_GT(bad.diagnostics.at("violations"), 0.0);
  EXPECT_THROW(khasminskii_radial_check(ModelManifold::euclidean(2), w, expr::parse("1-t", "t"),
                                        Flavor::Yau),
               ParameterError);
  // int ds / (1+s)^2 converges: not a Khas'minskii pair
  const auto sq = khasminskii_radial_check(ModelManifold::euclidean(2), w,
                                           expr::parse("4*(1+t)^2", "t"), Flavor::Yau);
  EXPECT_EQ(sq.status, Status::Inconclusive);
}

TEST(Khasminskii, HessianVariant) {
  const auto R3 = ModelManifold::euclidean(3);
  const auto e = hessian_khasminskii_check(R3, RadialFunction::from_expr(expr::parse("-exp(r)"), 0.1));
  EXPECT_EQ(e.status, Status::Fails);
  EXPECT_GT(e.diagnostics.at("violations"), 0.0);
  const auto c = hessian_khasminskii_check(R3, RadialFunction::from_expr(expr::parse("-cosh(r)"), 0.1));
  EXPECT_EQ(c.status, Status::Holds) << c.note;  // w'' = w, sinh(r)/r <= cosh(r), tanh(r) <= 1
  const auto k = hessian_khasminskii_check(custom(2, "r", 4.0),
                                           RadialFunction::from_expr(expr::parse("-1"), 0.5));
  EXPECT_EQ(k.status, Status::Fails);
  // w = -1 - r^2/4 (dim 2): Hessian (-1/2, -1/2) >= w once r >= sqrt(2)... sampled from r = 2
  const auto ok = hessian_khasminskii_check(ModelManifold::euclidean(2),
                                            RadialFunction::from_expr(expr::parse("-1-r^2/4"), 2.0));
  EXPECT_EQ(ok.status, Status::Holds) << ok.note;
}

TEST(Polar, KernelsAreCertified) {
  const auto l = polar_potential(ModelManifold::euclidean(2), 2.0);
  EXPECT_TRUE(l.certified);
  EXPECT_TRUE(l.tends_to_minus_infinity);
  EXPECT_NEAR(l.psi(std::exp(1.0)), 1.0, 1e-15);
  const auto p3 = polar_potential(ModelManifold::euclidean(5), 3.0);
  EXPECT_TRUE(p3.certified);
  EXPECT_LE(p3.max_defect, 1e-10);
  EXPECT_NEAR(p3.psi(2.0), -0.5, 1e-15);
  const auto n = polar_potential(ModelManifold::euclidean(4), 4.0);
  EXPECT_TRUE(n.certified);
  EXPECT_NEAR(radial_laplacian(ModelManifold::euclidean(4), n.psi, 1.7), 0.0, 1e-12);
  const auto f = polar_potential(ModelManifold::euclidean(4), 2.5);
  EXPECT_TRUE(f.certified);
  EXPECT_THROW(polar_potential(ModelManifold::euclidean(3), 4.0), ParameterError);
  EXPECT_THROW(polar_potential(ModelManifold::hyperbolic(3), 2.0), ParameterError);
}
