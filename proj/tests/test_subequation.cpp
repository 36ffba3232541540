#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mpak/core/error.hpp"
#include "mpak/jets/catalog.hpp"
#include "mpak/jets/linalg.hpp"
#include "mpak/jets/structure.hpp"

using namespace mpak::jets;
using mpak::expr::parse;

namespace {

Jet jet2(double value, Eigen::Vector2d p, Eigen::Matrix2d A) { return Jet(1.0, value, p, A); }

SubeqParams with_f(double c) {
  SubeqParams p;
  p.f = f_linear(c);
  return p;
}

struct CatalogEntry {
  std::string name;
  SubeqParams params;
  SamplerOptions opts;
};

std::vector<CatalogEntry> catalog(int m) {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string n, SubeqParams p, SamplerOptions o = {}) {
    out.push_back({std::move(n), std::move(p), o});
  };
  add("eikonal", {});
  add("dual_eikonal", {});
  SubeqParams xi;
  xi.xi = xi_linear(2.0);
  add("eikonal_xi", xi);
  add("dual_eikonal_xi", xi);
  for (int k = 1; k <= m; ++k) {
    SubeqParams p = with_f(1.0);
    p.k = k;
    add("sum_smallest_k_f", p);
    add("sum_largest_k_f", p);
    add("lambda_k_f", p);
    for (int j = 1; j <= k; ++j) {
      SubeqParams g = with_f(0.5);
      g.k = k;
      g.j = j;
      add("garding_branch", g);
    }
  }
  SubeqParams pu = with_f(1.0);
  pu.lo = 0.5;
  pu.hi = 2.0;
  add("pucci_plus", pu);
  add("pucci_minus", pu);
  SamplerOptions moderate;
  moderate.grad_max = 3.0;
  for (auto a : {a_constant(), a_power(3.0), a_power(1.5), a_mean_curvature(), a_exp_square()}) {
    SubeqParams q = with_f(1.0);
    q.a = a;
    add("quasilinear", q, moderate);
    add("quasilinear_normalized", q, moderate);
  }
  add("inf_laplacian_normalized", with_f(1.0));
  return out;
}

}  // namespace

TEST(Catalog, EikonalMembership) {
  const auto E = make_subeq("eikonal", {}, 2);
  EXPECT_TRUE(E.contains(jet2(0, {0.5, 0}, Eigen::Matrix2d::Zero())));
  EXPECT_DOUBLE_EQ(E(jet2(0, {0.5, 0}, Eigen::Matrix2d::Zero())), 0.5);
  EXPECT_DOUBLE_EQ(E(jet2(0, {0, 2}, Eigen::Matrix2d::Zero())), -1.0);
  EXPECT_FALSE(E.contains(jet2(0, {0, 2}, Eigen::Matrix2d::Zero())));
}

TEST(Catalog, TraceMinusF) {
  SubeqParams p = with_f(1.0);
  p.k = 2;
  const auto F = make_subeq("sum_smallest_k_f", p, 2);
  const Jet J = jet2(1.0, {0, 0}, Eigen::Matrix2d::Identity());
  EXPECT_DOUBLE_EQ(F(J), 1.0);
  EXPECT_TRUE(F.contains(J));
}

TEST(Catalog, InfinityLaplacianAndClosureAtZeroGradient) {
  const auto F = make_subeq("inf_laplacian_normalized", {}, 2);
  EXPECT_DOUBLE_EQ(F(jet2(0, {1, 0}, Eigen::Vector2d(2, 5).asDiagonal())), 2.0);
  const Jet zero = jet2(0, {0, 0}, Eigen::Vector2d(-1, 3).asDiagonal());
  EXPECT_TRUE(F.contains(zero));
  // closure oracle: maximise the defining expression over unit gradient directions
  double best = -1e300;
  for (int i = 0; i < 3600; ++i) {
    const double th = 2 * M_PI * i / 3600;
    best = std::max(best, F(jet2(0, {1e-9 * std::cos(th), 1e-9 * std::sin(th)},
                                 Eigen::Vector2d(-1, 3).asDiagonal())));
  }
  EXPECT_NEAR(F(zero), best, 1e-9);
}

TEST(Catalog, QuasilinearAgreesWithExpandedDivergenceForm) {
  const int m = 3;
  const double q = 3.0;
  SubeqParams p = with_f(1.0);
  p.a = a_power(q);
  const auto F = make_subeq("quasilinear", p, m);
  JetSampler s(m, 17);
  for (int i = 0; i < 100; ++i) {
    const Jet J = s.jet();
    const double t = J.gradient.norm();
    const Eigen::VectorXd e = J.gradient / t;
    const double expected =
        t * (J.hessian.trace() + (q - 2) * e.dot(J.hessian * e)) - J.value;
    // T(p) = a I + a'/|p| p p^T with a = t^(q-2)
    const double a = std::pow(t, q - 2), ap = (q - 2) * std::pow(t, q - 3);
    const Eigen::MatrixXd T =
        a * Eigen::MatrixXd::Identity(m, m) + ap / t * J.gradient * J.gradient.transpose();
    const double divergence = (T * J.hessian).trace() - J.value;
    EXPECT_NEAR(F(J), expected, 1e-10 * std::max(1.0, std::abs(expected)));
    EXPECT_NEAR(F(J), divergence, 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Catalog, QuasilinearNormalizedSharesSignsWhenFIsZero) {
  for (auto a : {a_power(3.0), a_power(1.5), a_mean_curvature(), a_exp_square()}) {
    SubeqParams p;
    p.a = a;
    const auto F = make_subeq("quasilinear", p, 3);
    const auto N = make_subeq("quasilinear_normalized", p, 3);
    SamplerOptions o;
    o.grad_max = 3.0;
    JetSampler s(3, 5, o);
    for (int i = 0; i < 2000; ++i) {
      const Jet J = s.jet();
      const double x = F(J), y = N(J);
      if (x != 0.0) {
        EXPECT_EQ(x > 0, y > 0) << a.str();
      }
    }
  }
}

TEST(Catalog, RejectsBadParameters) {
  EXPECT_THROW(make_subeq("nonsense", {}, 2), mpak::ParameterError);
  SubeqParams even;
  even.f = parse("r^2");
  EXPECT_THROW(make_subeq("sum_smallest_k_f", even, 2), mpak::ParameterError);
  SubeqParams dec;
  dec.f = parse("-r");
  EXPECT_THROW(make_subeq("lambda_k_f", dec, 2), mpak::ParameterError);
  SubeqParams xi;
  xi.xi = parse("r");
  EXPECT_THROW(make_subeq("eikonal_xi", xi, 2), mpak::ParameterError);
  SubeqParams a;
  a.a = parse("-1 + 0*t", "t");
  EXPECT_THROW(make_subeq("quasilinear", a, 2), mpak::ParameterError);
  SubeqParams k;
  k.k = 4;
  EXPECT_THROW(make_subeq("lambda_k_f", k, 3), mpak::ParameterError);
  SubeqParams pu;
  pu.lo = 2;
  pu.hi = 1;
  EXPECT_THROW(make_subeq("pucci_plus", pu, 2), mpak::ParameterError);
  EXPECT_THROW(make_subeq("eikonal", {}, 2)(Jet::radial(3, 1, 0, 0, 0, 0)), mpak::DomainError);
}

TEST(Catalog, PositivityAndNegativityOnEveryEntry) {
  for (int m : {2, 4}) {
    for (const auto& e : catalog(m)) {
      const auto F = make_subeq(e.name, e.params, m);
      const auto P = check_positivity(F, 10000, 101, e.opts);
      const auto N = check_negativity(F, 10000, 202, e.opts);
      EXPECT_TRUE(P.ok()) << F.name() << " m=" << m << ": " << P.first_violation;
      EXPECT_TRUE(N.ok()) << F.name() << " m=" << m << ": " << N.first_violation;
    }
  }
}

TEST(Duality, EikonalDualIsOutsideOfUnitBall) {
  const auto D = dual(make_subeq("eikonal", {}, 3));
  EXPECT_EQ(D.name(), "dual_eikonal");
  EXPECT_TRUE(D.contains(Jet::radial(3, 1, 0, 1.5, 0, 0)));
  EXPECT_FALSE(D.contains(Jet::radial(3, 1, 0, 0.5, 0, 0)));
  const auto rep = compare_membership(D, *closed_form_dual(make_subeq("eikonal", {}, 3)), 10000, 1);
  EXPECT_TRUE(rep.ok()) << rep.first_violation;
}

TEST(Duality, TraceIsSelfDual) {
  SubeqParams p = with_f(1.0);
  p.k = 3;
  const auto F = make_subeq("sum_smallest_k_f", p, 3);
  EXPECT_EQ(dual(F).name(), F.name());
  const auto rep = compare_membership(dual(F), F, 10000, 2);
  EXPECT_TRUE(rep.ok()) << rep.first_violation;
}

TEST(Duality, EveryClosedFormDualMatchesNegation) {
  for (int m : {2, 3, 5}) {
    for (const auto& e : catalog(m)) {
      const auto F = make_subeq(e.name, e.params, m);
      const auto closed = closed_form_dual(F);
      ASSERT_TRUE(closed.has_value()) << F.name();
      const auto rep = compare_membership(dual(F), *closed, 10000, 3, e.opts);
      EXPECT_TRUE(rep.ok()) << F.name() << " m=" << m << ": " << rep.first_violation;
      EXPECT_LT(rep.skipped, rep.samples / 10);
    }
  }
}

TEST(Duality, LambdaKDualIsMirroredIndex) {
  SubeqParams p;
  p.k = 2;
  const auto F = make_subeq("lambda_k_f", p, 5);
  const auto D = dual(F);
  EXPECT_EQ(D.params().k, 4);
  JetSampler s(5, 9);
  for (int i = 0; i < 1000; ++i) {
    const Jet J = s.jet();
    EXPECT_DOUBLE_EQ(D(J), eigenvalues(J.hessian)(3));
  }
}

TEST(Duality, PucciPlusDualIsPucciMinus) {
  SubeqParams p;
  p.lo = 0.25;
  p.hi = 4.0;
  const auto plus = make_subeq("pucci_plus", p, 3);
  const auto minus = make_subeq("pucci_minus", p, 3);
  JetSampler s(3, 10);
  for (int i = 0; i < 1000; ++i) {
    const Jet J = s.jet();
    EXPECT_NEAR(dual(plus)(J), minus(J), 1e-12);
  }
}

TEST(Duality, InvolutionAndDeMorganOnCatalogPairs) {
  const int m = 3;
  const auto entries = catalog(m);
  for (std::size_t i = 0; i < entries.size(); i += 3) {
    for (std::size_t j = 0; j < entries.size(); j += 5) {
      const auto F = make_subeq(entries[i].name, entries[i].params, m);
      const auto G = make_subeq(entries[j].name, entries[j].params, m);
      SamplerOptions o;
      o.grad_max = 3.0;
      const auto rep = duality_suite(F, G, 2000, i * 31 + j, o);
      EXPECT_TRUE(rep.ok()) << F.name() << " / " << G.name() << ": "
                            << rep.involution.first_violation << rep.de_morgan.first_violation;
    }
  }
  const auto E = make_subeq("eikonal", {}, m);
  EXPECT_TRUE(duality_suite(E, E, 10000, 1).ok());
}

TEST(Duality, ObstacleDualIsMaxOfDualAndReflectedObstacle) {
  const auto F = make_subeq("laplace", {}, 2);
  const auto O = obstacle_of(F, [](double r) { return 0.3 * r; });
  JetSampler s(2, 12);
  for (int i = 0; i < 500; ++i) {
    const Jet J = s.jet();
    EXPECT_DOUBLE_EQ(dual(O)(J), std::max(dual(F)(J), -0.3 * J.radius - J.value));
  }
}

TEST(Riesz, ElementaryCones) {
  for (int m = 2; m <= 6; ++m) {
    for (int k = 1; k <= m; ++k) {
      SubeqParams p;
      p.k = k;
      const double pf = riesz_characteristic(make_subeq("sum_smallest_k", p, m));
      EXPECT_NEAR(pf, k, 1e-6) << "m=" << m << " k=" << k;
    }
    SubeqParams p;
    p.k = 1;
    EXPECT_NEAR(riesz_characteristic(make_subeq("lambda_k", p, m)), 1.0, 1e-6);
    EXPECT_NEAR(riesz_characteristic(make_subeq("laplace", {}, m)), m, 1e-6);
  }
}

TEST(Riesz, RejectsGradientDependentSubequations) {
  EXPECT_THROW(riesz_characteristic(make_subeq("eikonal", {}, 3)), mpak::ParameterError);
  EXPECT_THROW(riesz_characteristic(make_subeq("sum_smallest_k_f", with_f(1.0), 3)),
               mpak::ParameterError);
}

TEST(Riesz, UnboundedCharacteristicIsInfinite) {
  SubeqParams p;
  p.k = 3;
  const auto upper = make_subeq("lambda_k", p, 3);  // largest eigenvalue stays 1
  EXPECT_TRUE(std::isinf(riesz_characteristic(upper)));
}

TEST(Monotonicity, WeylAndTraceAndCounterexample) {
  SubeqParams k1;
  k1.k = 1;
  SubeqParams k2;
  k2.k = 2;
  const auto psd = make_subeq("lambda_k", k1, 3);
  const auto lam2 = make_subeq("lambda_k", k2, 3);
  const auto tr = make_subeq("laplace", {}, 3);

  const auto weyl = monotonicity_check(lam2, psd, 2000, 1);
  EXPECT_TRUE(weyl.holds_on_samples);
  EXPECT_FALSE(weyl.counterexample.has_value());

  EXPECT_TRUE(monotonicity_check(tr, tr, 2000, 2).holds_on_samples);

  const auto bad = monotonicity_check(psd, tr, 2000, 3);
  EXPECT_FALSE(bad.holds_on_samples);
  ASSERT_TRUE(bad.counterexample.has_value());
  const Jet sum = bad.counterexample->first + bad.counterexample->second;
  EXPECT_FALSE(psd.contains(sum));

  // the explicit pair: A = 0 in F, P = diag(2, -1, 0) in M, A + P not in F
  const Jet zero = Jet::radial(3, 1, 0, 0, 0, 0);
  Jet P = zero;
  P.hessian.diagonal() << 2, -1, 0;
  EXPECT_TRUE(psd.contains(zero));
  EXPECT_TRUE(tr.contains(P));
  EXPECT_FALSE(psd.contains(zero + P));
}

TEST(Monotonicity, RejectsNonConeM) {
  EXPECT_THROW(monotonicity_check(make_subeq("laplace", {}, 2), make_subeq("eikonal", {}, 2),
                                  100, 4),
               mpak::ParameterError);
}

TEST(Branches, SmallestBranchEquivalence) {
  EXPECT_GE(garding_eigenvalues(Eigen::MatrixXd::Identity(3, 3), 2)(0), 0.0);
  const Eigen::Vector2d lam(-1, -1);
  EXPECT_LT(garding_from_eigenvalues(lam, 2)(0), 0.0);
  EXPECT_LT(sigma_k(lam, 1), 0.0);
  for (auto [k, m] : {std::pair{3, 4}, std::pair{2, 5}, std::pair{4, 4}, std::pair{1, 3}}) {
    const auto rep = branch_equivalence_check(k, m, 10000, 55);
    EXPECT_TRUE(rep.ok()) << rep.first_violation;
    EXPECT_LT(rep.skipped, 100);
  }
}
