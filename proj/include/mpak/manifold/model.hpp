#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mpak/core/grid.hpp"
#include "mpak/expr/expr.hpp"

namespace mpak::manifold {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rotationally symmetric model dr^2 + g(r)^2 dtheta^2 of dimension m on [0, R_max).
class ModelManifold {
 public:
  enum class Kind { Euclidean, Hyperbolic, Custom };

  ModelManifold(int m, expr::Expr g, double r_max = kInf);

  static ModelManifold euclidean(int m);
  /// g = sinh(sqrt(c) r) / sqrt(c), sectional curvature -c.
  static ModelManifold hyperbolic(int m, double c = 1.0);

  int dim() const { return m_; }
  double r_max() const { return r_max_; }
  bool complete() const { return r_max_ == kInf; }
  Kind kind() const { return kind_; }
  double curvature_parameter() const { return c_; }

  const expr::Expr& g_expr() const { return g_; }
  const expr::Expr& g1_expr() const { return g1_; }
  const expr::Expr& g2_expr() const { return g2_; }

  double g(double r) const;
  double g1(double r) const;
  double g2(double r) const;
  expr::LogValue g_log(double r) const;
  /// g'/g, evaluated in log space so it stays finite where g overflows.
  double log_derivative(double r) const;
  /// g''/g, likewise.
  double second_ratio(double r) const;

  /// g(0) = 0 and g'(0) = 1 to 1e-8.
  bool has_smooth_pole() const;

  /// Grammar form: euclidean:m=.., hyperbolic:m=..,c=.., custom:m=..,g=..[,rmax=..].
  std::string spec() const;

 private:
  int m_;
  expr::Expr g_, g1_, g2_;
  expr::Expr ld_, ld1_;  // (log g)' and (log g)''
  double r_max_;
  Kind kind_ = Kind::Custom;
  double c_ = 0.0;
};

/// Radial function with first and second derivatives on [lo, hi].
class RadialFunction {
 public:
  using Fn = std::function<double(double)>;

  RadialFunction(Fn value, Fn d1, Fn d2, double lo = 0.0, double hi = kInf,
                 std::string label = {});

  static RadialFunction from_expr(const expr::Expr& e, double lo = 0.0, double hi = kInf);
  /// Piecewise-linear values; derivatives by finite differences on the grid.
  static RadialFunction from_grid(const GridFunction& u);

  double operator()(double r) const { return value_(r); }
  double d1(double r) const { return d1_(r); }
  double d2(double r) const { return d2_(r); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::string& label() const { return label_; }
  const std::optional<expr::Expr>& expression() const { return expr_; }
  const std::optional<GridFunction>& grid() const { return grid_; }

  /// Samples onto a uniform grid.
  GridFunction sample(const Grid& grid) const;

 private:
  Fn value_, d1_, d2_;
  double lo_, hi_;
  std::string label_;
  std::optional<expr::Expr> expr_;
  std::optional<GridFunction> grid_;
};

/// Delta u = u'' + (m-1)(g'/g) u'.
double radial_laplacian(const ModelManifold& M, const RadialFunction& u, double r);

struct RadialHessian {
  double radial;      // u''
  double tangential;  // (g'/g) u', multiplicity m-1
  int tangential_multiplicity;
  /// All m eigenvalues, ascending.
  std::vector<double> sorted() const;
};
RadialHessian radial_hessian(const ModelManifold& M, const RadialFunction& u, double r);

struct Curvature {
  double sect_radial;
  double ricci_radial;
  double ric_k_radial;
};
Curvature curvature(const ModelManifold& M, double r);

/// Area of the unit (m-1)-sphere, 2 pi^{m/2} / Gamma(m/2).
double omega(int m_minus_1);

/// omega_{m-1} int_0^r g^{m-1}, relative accuracy about 1e-10.
double volume_ball(const ModelManifold& M, double r);
double log_volume_ball(const ModelManifold& M, double r);

}  // namespace mpak::manifold
