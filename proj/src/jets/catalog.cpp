#include "mpak/jets/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mpak/core/error.hpp"
#include "mpak/jets/linalg.hpp"

namespace mpak::jets {

using expr::Expr;

namespace {

std::vector<double> symmetric_samples() {
  std::vector<double> pos;
  for (double s = 1e-3; s <= 1e3 * 1.0001; s *= std::pow(10.0, 0.25)) pos.push_back(s);
  std::vector<double> out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

void validate_odd_monotone(const Expr& fn, const char* label, int direction, bool allow_zero) {
  if (std::abs(fn(0.0)) > 1e-12)
    throw ParameterError(std::string(label) + "(0) must be 0, got " + std::to_string(fn(0.0)));
  const auto xs = symmetric_samples();
  std::vector<double> ys;
  bool all_zero = true;
  for (double x : xs) {
    const double y = fn(x);
    if (std::isnan(y))
      throw ParameterError(std::string(label) + " is undefined at " + std::to_string(x));
    if (y != 0.0) all_zero = false;
    ys.push_back(y);
  }
  if (allow_zero && all_zero) return;
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = ys[i];
    const double y_mirror = ys[n - 1 - i];
    if (std::isfinite(y) && std::abs(y + y_mirror) > 1e-9 * std::max(1.0, std::abs(y)))
      throw ParameterError(std::string(label) + " is not odd at " + std::to_string(xs[i]));
    if (i > 0 && !(direction * (y - ys[i - 1]) > 0.0))
      throw ParameterError(std::string(label) + " is not strictly " +
                           (direction > 0 ? "increasing" : "decreasing") + " near " +
                           std::to_string(xs[i]));
  }
}

struct Profiles {
  Expr f;
  Expr xi;
  Expr a;
  Expr a_prime;
};

Profiles resolve(const SubeqParams& p) {
  Profiles out;
  out.f = p.f ? *p.f : f_zero();
  out.xi = p.xi ? *p.xi : xi_linear(1.0);
  out.a = p.a ? *p.a : a_constant();
  out.a_prime = out.a.derivative();
  return out;
}

// sup over unit e of theta2 tr A + (theta1 - theta2) A(e,e)
double sup_direction(const Theta& th, const Eigen::VectorXd& lam) {
  const double d = th.theta1 - th.theta2;
  return th.theta2 * lam.sum() + d * (d > 0 ? lam(lam.size() - 1) : lam(0));
}

// theta at the origin, falling back to the t -> 0+ limit when a or a' is singular there.
Theta theta_at_origin(const Expr& a, const Expr& ap, bool normalized) {
  Theta th = quasilinear_theta(a, ap, 0.0);
  const bool ok = std::isfinite(th.theta1) && std::isfinite(th.theta2) &&
                  (!normalized || std::max(th.theta1, th.theta2) > 0.0);
  if (ok) return th;
  return quasilinear_theta(a, ap, 1e-12);
}

double quasilinear_value(const Profiles& pr, const Jet& J, bool normalized) {
  const double t = J.gradient.norm();
  Theta th;
  double bracket;
  if (t > 0.0) {
    th = quasilinear_theta(pr.a, pr.a_prime, t);
    const Eigen::VectorXd e = J.gradient / t;
    const double app = e.dot(J.hessian * e);
    const double tr = J.hessian.trace();
    bracket = th.theta1 * app + th.theta2 * (tr - app);
  } else {
    th = theta_at_origin(pr.a, pr.a_prime, normalized);
    bracket = sup_direction(th, eigenvalues(J.hessian));
  }
  if (normalized) bracket /= std::max(th.theta1, th.theta2);
  return bracket - pr.f(J.value);
}

int require_k(const SubeqParams& p, int m, const std::string& name) {
  if (p.k < 1 || p.k > m)
    throw ParameterError(name + " needs 1 <= k <= m = " + std::to_string(m) + ", got k = " +
                         std::to_string(p.k));
  return p.k;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a{
      {"laplace", "sum_smallest_k_f"},
      {"sum_smallest_k", "sum_smallest_k_f"},
      {"sum_largest_k", "sum_largest_k_f"},
      {"lambda_k", "lambda_k_f"},
      {"inf_laplacian", "inf_laplacian_normalized"},
  };
  return a;
}

}  // namespace

Expr f_linear(double c) { return Expr::constant(c) * Expr::var("r"); }
Expr f_zero() { return Expr::constant(0.0); }
Expr xi_linear(double c) { return Expr::constant(-c) * Expr::var("r"); }
Expr a_constant() { return Expr::constant(1.0, "t"); }
Expr a_power(double q) { return pow(Expr::var("t"), Expr::constant(q - 2.0, "t")); }
Expr a_mean_curvature() { return expr::parse("(1 + t^2)^(-0.5)", "t"); }
Expr a_exp_square() { return expr::parse("exp(t^2)", "t"); }

void validate_f(const Expr& f) { validate_odd_monotone(f, "f", +1, true); }
void validate_xi(const Expr& xi) { validate_odd_monotone(xi, "xi", -1, false); }

void validate_a(const Expr& a) {
  const Expr ap = a.derivative();
  for (double t = 1e-6; t <= 1e2 * 1.0001; t *= std::pow(10.0, 0.25)) {
    const Theta th = quasilinear_theta(a, ap, t);
    if (std::isnan(th.theta1) || std::isnan(th.theta2) || !(th.theta1 >= 0.0) ||
        !(th.theta2 > 0.0))
      throw ParameterError("profile a violates theta1 = a + t a' >= 0, theta2 = a > 0 at t = " +
                           std::to_string(t));
  }
}

Theta quasilinear_theta(const Expr& a, const Expr& a_prime, double t) {
  const double av = a(t);
  if (t == 0.0) return {av, av};
  return {av + t * a_prime(t), av};
}

std::vector<std::string> catalog_names() {
  return {"eikonal",        "eikonal_xi",     "dual_eikonal",     "dual_eikonal_xi",
          "sum_smallest_k_f", "sum_largest_k_f", "lambda_k_f",     "garding_branch",
          "pucci_plus",     "pucci_minus",    "quasilinear",      "quasilinear_normalized",
          "inf_laplacian_normalized"};
}

Subequation make_subeq(const std::string& requested, const SubeqParams& params_in, int m) {
  if (m < 2) throw ParameterError("dimension m must be at least 2");
  std::string name = requested;
  SubeqParams params = params_in;
  if (auto it = aliases().find(requested); it != aliases().end()) {
    name = it->second;
    if (requested == "laplace") {
      params.k = m;
      params.f = f_zero();
    }
  }
  if (params.f) validate_f(*params.f);
  if (params.xi) validate_xi(*params.xi);
  if (params.a) validate_a(*params.a);
  if (!params.f) params.f = f_zero();
  const Profiles pr = resolve(params);
  SubeqParams dp = params;

  if (name == "eikonal")
    return Subequation(name, m, [](const Jet& J) { return 1.0 - J.gradient.norm(); }, params,
                       "dual_eikonal");
  if (name == "dual_eikonal")
    return Subequation(name, m, [](const Jet& J) { return J.gradient.norm() - 1.0; }, params,
                       "eikonal");
  if (name == "eikonal_xi" || name == "dual_eikonal_xi") {
    if (!params.xi) params.xi = xi_linear(1.0);
    const bool primal = name == "eikonal_xi";
    auto fn = [pr, primal](const Jet& J) {
      return primal ? pr.xi(J.value) - J.gradient.norm() : J.gradient.norm() + pr.xi(J.value);
    };
    return Subequation(name, m, fn, params, primal ? "dual_eikonal_xi" : "eikonal_xi", params);
  }
  if (name == "sum_smallest_k_f" || name == "sum_largest_k_f") {
    const int k = require_k(params, m, name);
    const bool smallest = name == "sum_smallest_k_f";
    auto fn = [pr, k, smallest](const Jet& J) {
      const Eigen::VectorXd lam = eigenvalues(J.hessian);
      return (smallest ? sum_smallest(lam, k) : sum_largest(lam, k)) - pr.f(J.value);
    };
    std::string d = k == m ? "sum_smallest_k_f" : (smallest ? "sum_largest_k_f" : "sum_smallest_k_f");
    if (k == m) name = "sum_smallest_k_f";
    return Subequation(name, m, fn, params, d, dp);
  }
  if (name == "lambda_k_f") {
    const int k = require_k(params, m, name);
    auto fn = [pr, k](const Jet& J) { return eigenvalues(J.hessian)(k - 1) - pr.f(J.value); };
    dp.k = m - k + 1;
    return Subequation(name, m, fn, params, "lambda_k_f", dp);
  }
  if (name == "garding_branch") {
    const int k = require_k(params, m, name);
    const int j = params.j;
    if (j < 1 || j > k)
      throw ParameterError("garding_branch needs 1 <= j <= k, got j = " + std::to_string(j));
    auto fn = [pr, k, j](const Jet& J) {
      return garding_eigenvalues(J.hessian, k)(j - 1) - pr.f(J.value);
    };
    dp.j = k - j + 1;
    return Subequation(name, m, fn, params, "garding_branch", dp);
  }
  if (name == "pucci_plus" || name == "pucci_minus") {
    if (!(params.lo > 0.0) || !(params.lo <= params.hi))
      throw ParameterError("Pucci subequation needs 0 < lambda <= Lambda");
    const PucciSign sign = name == "pucci_plus" ? PucciSign::Plus : PucciSign::Minus;
    auto fn = [pr, sign, lo = params.lo, hi = params.hi](const Jet& J) {
      return pucci(J.hessian, lo, hi, sign) - pr.f(J.value);
    };
    return Subequation(name, m, fn, params, sign == PucciSign::Plus ? "pucci_minus" : "pucci_plus",
                       dp);
  }
  if (name == "quasilinear" || name == "quasilinear_normalized") {
    const bool normalized = name == "quasilinear_normalized";
    auto fn = [pr, normalized](const Jet& J) { return quasilinear_value(pr, J, normalized); };
    return Subequation(name, m, fn, params, name, dp);
  }
  if (name == "inf_laplacian_normalized") {
    auto fn = [pr](const Jet& J) {
      const double t = J.gradient.norm();
      if (t == 0.0) return eigenvalues(J.hessian).maxCoeff() - pr.f(J.value);
      const Eigen::VectorXd e = J.gradient / t;
      return e.dot(J.hessian * e) - pr.f(J.value);
    };
    return Subequation(name, m, fn, params, name, dp);
  }
  throw ParameterError("unknown subequation '" + requested + "'");
}

}  // namespace mpak::jets
