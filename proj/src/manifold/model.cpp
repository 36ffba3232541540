#include "mpak/manifold/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "mpak/core/error.hpp"
#include "mpak/manifold/quadrature.hpp"

namespace mpak::manifold {

namespace {

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

// d/dr log|e|, split over products, quotients, constant powers and exp so that the
// large parts of log g cancel symbolically rather than in floating point.
expr::Expr log_derivative_expr(const expr::Expr& e) {
  using expr::Op;
  const auto& n = *e.root();
  const std::string& v = e.variable();
  auto sub = [&v](const expr::NodePtr& p) { return expr::Expr(p, v); };
  switch (n.op) {
    case Op::Number: return expr::Expr::constant(0.0, v);
    case Op::Neg: return log_derivative_expr(sub(n.lhs));
    case Op::Mul: return log_derivative_expr(sub(n.lhs)) + log_derivative_expr(sub(n.rhs));
    case Op::Div: return log_derivative_expr(sub(n.lhs)) - log_derivative_expr(sub(n.rhs));
    case Op::Pow:
      if (sub(n.rhs).is_constant()) return sub(n.rhs) * log_derivative_expr(sub(n.lhs));
      break;
    case Op::Call:
      if (n.fn == expr::Fn::Exp) return sub(n.lhs).derivative();
      break;
    default: break;
  }
  return e.derivative() / e;
}

}  // namespace

ModelManifold::ModelManifold(int m, expr::Expr g, double r_max)
    : m_(m), g_(std::move(g)), r_max_(r_max) {
  if (m < 2) throw ParameterError("model dimension must be at least 2");
  if (!(r_max > 0.0)) throw ParameterError("R_max must be positive");
  g1_ = g_.derivative();
  g2_ = g1_.derivative();
  ld_ = log_derivative_expr(g_).simplified();
  ld1_ = ld_.derivative();
}

ModelManifold ModelManifold::euclidean(int m) {
  ModelManifold M(m, expr::Expr::var("r"));
  M.kind_ = Kind::Euclidean;
  return M;
}

ModelManifold ModelManifold::hyperbolic(int m, double c) {
  if (!(c > 0.0)) throw ParameterError("hyperbolic model needs c > 0");
  const double s = std::sqrt(c);
  expr::Expr g = c == 1.0 ? call(expr::Fn::Sinh, expr::Expr::var("r"))
                          : call(expr::Fn::Sinh, expr::Expr::constant(s) * expr::Expr::var("r")) /
                                expr::Expr::constant(s);
  ModelManifold M(m, g);
  M.kind_ = Kind::Hyperbolic;
  M.c_ = c;
  return M;
}

double ModelManifold::g(double r) const { return g_(r); }
double ModelManifold::g1(double r) const { return g1_(r); }
double ModelManifold::g2(double r) const { return g2_(r); }
expr::LogValue ModelManifold::g_log(double r) const { return g_.eval_log(r); }

double ModelManifold::log_derivative(double r) const {
  switch (kind_) {
    case Kind::Euclidean: return 1.0 / r;
    case Kind::Hyperbolic: {
      const double s = std::sqrt(c_);
      return s / std::tanh(s * r);
    }
    case Kind::Custom: break;
  }
  return ld_.eval_log(r).value();
}

double ModelManifold::second_ratio(double r) const {
  switch (kind_) {
    case Kind::Euclidean: return 0.0;
    case Kind::Hyperbolic: return c_;
    case Kind::Custom: break;
  }
  const double ld = ld_.eval_log(r).value();
  return ld1_.eval_log(r).value() + ld * ld;
}

bool ModelManifold::has_smooth_pole() const {
  return std::abs(g_(0.0)) <= 1e-8 && std::abs(g1_(0.0) - 1.0) <= 1e-8;
}

std::string ModelManifold::spec() const {
  switch (kind_) {
    case Kind::Euclidean: return "euclidean:m=" + std::to_string(m_);
    case Kind::Hyperbolic: return "hyperbolic:m=" + std::to_string(m_) + ",c=" + shortest(c_);
    case Kind::Custom: break;
  }
  std::string s = "custom:m=" + std::to_string(m_) + ",g=" + g_.str();
  if (!complete()) s += ",rmax=" + shortest(r_max_);
  return s;
}

RadialFunction::RadialFunction(Fn value, Fn d1, Fn d2, double lo, double hi, std::string label)
    : value_(std::move(value)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      lo_(lo),
      hi_(hi),
      label_(std::move(label)) {}

RadialFunction RadialFunction::from_expr(const expr::Expr& e, double lo, double hi) {
  const expr::Expr e1 = e.derivative();
  const expr::Expr e2 = e1.derivative();
  RadialFunction f([e](double r) { return e(r); }, [e1](double r) { return e1(r); },
                   [e2](double r) { return e2(r); }, lo, hi, e.str());
  f.expr_ = e;
  return f;
}

RadialFunction RadialFunction::from_grid(const GridFunction& u) {
  const double h = u.grid.geometric ? u.grid.gap(0) : u.grid.h();
  auto val = [u](double r) { return u.at(r); };
  auto d1 = [u, h](double r) {
    const double a = std::max(r - h, u.grid.r0);
    const double b = std::min(r + h, u.grid.r1);
    return (u.at(b) - u.at(a)) / (b - a);
  };
  auto d2 = [u, h](double r) {
    const double c = std::clamp(r, u.grid.r0 + h, u.grid.r1 - h);
    return (u.at(c + h) - 2.0 * u.at(c) + u.at(c - h)) / (h * h);
  };
  RadialFunction f(val, d1, d2, u.grid.r0, u.grid.r1, "grid");
  f.grid_ = u;
  return f;
}

GridFunction RadialFunction::sample(const Grid& grid) const {
  GridFunction out(grid, 0.0);
  for (int i = 0; i < grid.n; ++i) out[i] = value_(grid.r(i));
  return out;
}

double radial_laplacian(const ModelManifold& M, const RadialFunction& u, double r) {
  if (!(r > 0.0)) throw DomainError("radial Laplacian needs r > 0");
  const double d1 = u.d1(r);
  const double drift = d1 == 0.0 ? 0.0 : (M.dim() - 1) * M.log_derivative(r) * d1;
  return u.d2(r) + drift;
}

std::vector<double> RadialHessian::sorted() const {
  std::vector<double> v(static_cast<std::size_t>(tangential_multiplicity), tangential);
  v.push_back(radial);
  std::sort(v.begin(), v.end());
  return v;
}

RadialHessian radial_hessian(const ModelManifold& M, const RadialFunction& u, double r) {
  if (!(r > 0.0)) throw DomainError("radial Hessian needs r > 0");
  const double d1 = u.d1(r);
  return {u.d2(r), d1 == 0.0 ? 0.0 : M.log_derivative(r) * d1, M.dim() - 1};
}

Curvature curvature(const ModelManifold& M, double r) {
  if (!(r > 0.0)) throw DomainError("curvature needs r > 0");
  const double k = -M.second_ratio(r);
  return {k, (M.dim() - 1) * k, k};
}

double omega(int k) {
  const double n = k + 1;
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double log_volume_ball(const ModelManifold& M, double r) {
  if (r < 0.0 || r > M.r_max()) throw DomainError("radius outside the model");
  const int m = M.dim();
  auto log_f = [M, m](double s) {
    const auto gl = M.g_log(s);
    if (gl.sign <= 0) return -kInf;
    return (m - 1) * gl.log_abs;
  };
  return std::log(omega(m - 1)) + log_integral(log_f, 0.0, r, 1e-12);
}

double volume_ball(const ModelManifold& M, double r) { return std::exp(log_volume_ball(M, r)); }

}  // namespace mpak::manifold
