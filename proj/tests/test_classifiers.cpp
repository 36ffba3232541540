#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "mpak/core/error.hpp"
#include "mpak/expr/expr.hpp"
#include "mpak/manifold/brownian.hpp"
#include "mpak/manifold/classifiers.hpp"

using namespace mpak;
using namespace mpak::manifold;

namespace {

ModelManifold custom(int m, const char* g, double r_max = kInf) {
  return ModelManifold(m, expr::parse(g), r_max);
}

}  // namespace

TEST(VolumeTest, TruthTable) {
  for (int m : {2, 3, 6})
    EXPECT_EQ(stochastic_completeness_volume_test(ModelManifold::euclidean(m)).status, Status::Holds);
  const auto h = stochastic_completeness_volume_test(ModelManifold::hyperbolic(3));
  EXPECT_EQ(h.status, Status::Holds);
  // integrand tends to 1/(m-1)
  EXPECT_NEAR(h.diagnostics.at("integrand_at_last_horizon"), 0.5, 1e-3);
  const auto e = stochastic_completeness_volume_test(custom(2, "exp(r^3)"));
  EXPECT_EQ(e.status, Status::Inconclusive);
  EXPECT_THROW(stochastic_completeness_volume_test(custom(2, "r", 3.0)), NotApplicable);
}

TEST(VolumeTest, NeverFails) {
  for (const char* g : {"exp(r^2)", "exp(r^3)", "r*exp(r^4)", "sinh(r)^3", "r"})
    EXPECT_NE(stochastic_completeness_volume_test(custom(3, g)).status, Status::Fails) << g;
}

TEST(AhlforsOde, WitnessTable) {
  const auto r2 = ahlfors_witness_ode(ModelManifold::euclidean(2), std::nullopt, 1.0, 0.1);
  EXPECT_EQ(r2.status, Status::Holds);
  const auto e = ahlfors_witness_ode(custom(2, "exp(r^3)"), std::nullopt, 1.0, 0.1);
  ASSERT_EQ(e.status, Status::Fails) << e.note;
  ASSERT_TRUE(e.witness);
  // the witness solves u'' + (g'/g) u' = u with u(1) = 0, u'(1) = 0.1, and is bounded
  const auto& u = *e.witness;
  EXPECT_NEAR(u(1.0), 0.0, 1e-15);
  EXPECT_NEAR(u.d1(1.0), 0.1, 1e-15);
  EXPECT_GT(u(50.0), 0.0);
  EXPECT_LT(u(100.0) - u(50.0), 1e-2 * u(100.0));
  EXPECT_LT(e.diagnostics.at("log_slope_du"), -1.1);
  const auto zero = ahlfors_witness_ode(ModelManifold::euclidean(2), std::nullopt, 1.0, 0.0);
  EXPECT_EQ(zero.status, Status::Holds);
  EXPECT_EQ((*zero.witness)(3.0), 0.0);
  EXPECT_THROW(ahlfors_witness_ode(ModelManifold::euclidean(2), std::nullopt, 0.0, 0.1), ParameterError);
}

TEST(AhlforsOde, WitnessMatchesAnIndependentIntegrator) {
  // u'' + u'/r = u on R^2 is I0/K0-type: compare to fixed-step RK4 at r = 5
  const auto v = ahlfors_witness_ode(ModelManifold::euclidean(2), std::nullopt, 1.0, 0.1);
  double r = 1.0, u = 0.0, du = 0.1;
  const int n = 40000;
  const double h = 4.0 / n;
  auto F = [](double s, double a, double b, double& da, double& db) {
    da = b;
    db = a - b / s;
  };
  for (int i = 0; i < n; ++i) {
    double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    F(r, u, du, k1a, k1b);
    F(r + h / 2, u + h / 2 * k1a, du + h / 2 * k1b, k2a, k2b);
    F(r + h / 2, u + h / 2 * k2a, du + h / 2 * k2b, k3a, k3b);
    F(r + h, u + h * k3a, du + h * k3b, k4a, k4b);
    u += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
    du += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
    r += h;
  }
  EXPECT_NEAR((*v.witness)(5.0), u, 1e-5 * u);
}

TEST(AhlforsOde, IncompleteModelStopsAtTheEdge) {
  const auto v = ahlfors_witness_ode(custom(2, "r", 4.0), std::nullopt, 1.0, 0.1);
  EXPECT_NE(v.status, Status::Fails);
  EXPECT_LE(v.diagnostics.at("r_reached"), 4.0);
}

TEST(Brownian, WilsonInterval) {
  double lo, hi;
  wilson_interval(0, 100, lo, hi);
  EXPECT_EQ(lo, 0.0);
  EXPECT_NEAR(hi, 0.036995, 1e-5);
  wilson_interval(50, 100, lo, hi);
  EXPECT_NEAR(lo, 0.40383, 1e-4);
  EXPECT_NEAR(hi, 0.59617, 1e-4);
  wilson_interval(100, 100, lo, hi);
  EXPECT_EQ(hi, 1.0);
  EXPECT_NE(splitmix64(1), splitmix64(2));
}

TEST(Brownian, ConcordanceWithOde) {
  BrownianOptions o;
  o.n_paths = 10000;
  o.seed = 20240601;
  const auto e = brownian_explosion_mc(custom(2, "exp(r^3)"), o);
  EXPECT_GT(e.ci_low, 0.0);
  EXPECT_TRUE(e.explosive());
  const auto f = brownian_explosion_mc(ModelManifold::euclidean(2), o);
  EXPECT_LT(f.ci_high, 0.01);
  EXPECT_FALSE(f.explosive());
}

TEST(Brownian, CatalogAgreesWithOdeWitness) {
  BrownianOptions o;
  o.n_paths = 2000;
  for (const auto& M : {ModelManifold::euclidean(3), ModelManifold::hyperbolic(3),
                        custom(3, "exp(r^2)*r"), custom(2, "exp(r^3)")}) {
    const bool bounded = ahlfors_witness_ode(M, std::nullopt, 1.0, 0.1).status == Status::Fails;
    EXPECT_EQ(brownian_explosion_mc(M, o).explosive(), bounded) << M.spec();
  }
}

TEST(Brownian, DeterministicAcrossThreadCounts) {
  BrownianOptions o;
  o.n_paths = 500;
  o.T = 0.5;
  const auto M = custom(2, "exp(r^3)");
  o.threads = 1;
  const auto a = brownian_explosion_mc(M, o);
  o.threads = 3;
  const auto b = brownian_explosion_mc(M, o);
  EXPECT_EQ(a.exploded, b.exploded);
  EXPECT_EQ(a.explosion_fraction, b.explosion_fraction);
  o.seed = 99;
  EXPECT_NO_THROW(brownian_explosion_mc(M, o));
}

TEST(Brownian, EdgeCases) {
  BrownianOptions o;
  o.T = 0.0;
  const auto z = brownian_explosion_mc(ModelManifold::euclidean(2), o);
  EXPECT_EQ(z.explosion_fraction, 0.0);
  EXPECT_EQ(z.exploded, 0);
  o.n_paths = 50;
  EXPECT_THROW(brownian_explosion_mc(ModelManifold::euclidean(2), o), ParameterError);
  o = {};
  o.r_explode = 0.0;
  o.n_paths = 100;
  o.T = 0.1;
  EXPECT_DOUBLE_EQ(brownian_explosion_mc(ModelManifold::euclidean(2), o).r_explode, 1e3);
}
