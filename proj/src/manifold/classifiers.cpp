#include "mpak/manifold/classifiers.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "mpak/core/error.hpp"
#include "mpak/manifold/quadrature.hpp"

namespace mpak::manifold {

namespace odeint = boost::numeric::odeint;

Verdict stochastic_completeness_volume_test(const ModelManifold& M,
                                            const DivergencePolicy& policy) {
  if (!M.complete())
    throw NotApplicable("the volume test needs a complete model (R_max = +inf)");
  const auto horizons = policy.ladder(0.0, kInf);
  const int m = M.dim();
  const LogIntegrand density = [M, m](double s) {
    const auto gl = M.g_log(s);
    return gl.sign <= 0 ? -kInf : (m - 1) * gl.log_abs;
  };

  // geometric mesh, 16 points per decade, with an even number of gaps between horizons
  std::vector<double> xs{horizons.front()};
  std::vector<std::size_t> at{0};
  for (std::size_t k = 0; k + 1 < horizons.size(); ++k) {
    const double span = std::log(horizons[k + 1] / horizons[k]);
    const int gaps = 2 * std::max(1, static_cast<int>(std::ceil(8.0 * span / std::log(10.0))));
    for (int j = 1; j <= gaps; ++j)
      xs.push_back(j == gaps ? horizons[k + 1] : horizons[k] * std::exp(span * j / gaps));
    at.push_back(xs.size() - 1);
  }

  const double log_omega = std::log(omega(m - 1));
  const double base = log_omega + log_integral(density, 0.0, xs.front(), 1e-12);
  const auto cum = log_cumulative_integral(density, xs, 1e-12);
  // integrate r / log vol B_r in s = log r, i.e. r^2 / log vol B_r ds
  std::vector<double> f(xs.size());
  Verdict v;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double log_vol = log_add(base, log_omega + cum[i]);
    if (!(log_vol > 0.0)) {
      v.status = Status::Inconclusive;
      v.note = "log vol B_r is not positive at the first horizon";
      return v;
    }
    f[i] = xs[i] * xs[i] / log_vol;
  }
  std::vector<double> log_inc;
  for (std::size_t k = 0; k + 1 < at.size(); ++k) {
    const std::size_t n = at[k + 1] - at[k];
    const double ds = std::log(horizons[k + 1] / horizons[k]) / static_cast<double>(n);
    double acc = f[at[k]] + f[at[k + 1]];
    for (std::size_t j = 1; j < n; ++j) acc += (j % 2 ? 4.0 : 2.0) * f[at[k] + j];
    acc *= ds / 3.0;
    log_inc.push_back(acc > 0.0 ? std::log(acc) : -kInf);
  }
  v.diagnostics["integrand_at_last_horizon"] = f.back() / xs.back();
  std::vector<double> ratios;
  const Tail tail = decide(log_inc, policy, &ratios);
  for (std::size_t k = 0; k < ratios.size(); ++k)
    v.diagnostics["ratio_" + std::to_string(k)] = ratios[k];
  v.status = tail == Tail::Divergent ? Status::Holds : Status::Inconclusive;
  v.note = "int r / log vol B_r is " + to_string(tail) +
           (tail == Tail::Divergent ? "" : "; the volume criterion is only sufficient");
  return v;
}

namespace {

using state = boost::numeric::ublas::vector<double>;
using matrix = boost::numeric::ublas::matrix<double>;

struct Sample {
  double r, u, du, d2u;
};

// Cubic Hermite on the step containing r: value from (u, u'), slope from (u', u'').
struct Witness {
  std::vector<Sample> s;

  std::size_t locate(double r) const {
    auto it = std::upper_bound(s.begin(), s.end(), r, [](double x, const Sample& a) { return x < a.r; });
    const auto i = static_cast<std::size_t>(it - s.begin());
    return std::clamp<std::size_t>(i, 1, s.size() - 1) - 1;
  }
  static double hermite(double t, double h, double y0, double d0, double y1, double d1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
  }
  double value(double r) const {
    if (r >= s.back().r) return s.back().u;
    const std::size_t i = locate(r);
    const Sample &a = s[i], &b = s[i + 1];
    const double h = b.r - a.r;
    return hermite(std::clamp((r - a.r) / h, 0.0, 1.0), h, a.u, a.du, b.u, b.du);
  }
  double slope(double r) const {
    if (r >= s.back().r) return s.back().du;
    const std::size_t i = locate(r);
    const Sample &a = s[i], &b = s[i + 1];
    const double h = b.r - a.r;
    return hermite(std::clamp((r - a.r) / h, 0.0, 1.0), h, a.du, a.d2u, b.du, b.d2u);
  }
};

}  // namespace

Verdict ahlfors_witness_ode(const ModelManifold& M, const std::optional<expr::Expr>& f_in,
                            double r0, double delta, OdeOptions opts) {
  if (!(r0 > 0.0) || !(r0 < M.r_max())) throw ParameterError("ODE witness needs 0 < r0 < R_max");
  if (delta < 0.0) throw ParameterError("ODE witness needs delta >= 0");
  Verdict v;
  v.diagnostics["r0"] = r0;
  v.diagnostics["delta"] = delta;
  if (delta == 0.0) {
    v.status = Status::Holds;
    v.note = "delta = 0 gives u = 0: vacuous";
    v.witness = RadialFunction([](double) { return 0.0; }, [](double) { return 0.0; },
                               [](double) { return 0.0; }, r0, kInf, "zero");
    return v;
  }
  const expr::Expr f = f_in ? *f_in : expr::Expr::var("u");
  const expr::Expr fp = f.derivative();
  const double k_m = M.dim() - 1;

  // r rides along as a third component: odeint's rosenbrock4 loses order on explicitly
  // time-dependent systems, so the system is made autonomous
  auto sys = [&](const state& x, state& dx, double) {
    dx(0) = x(1);
    dx(1) = f(x(0)) - k_m * M.log_derivative(x(2)) * x(1);
    dx(2) = 1.0;
  };
  auto jac = [&](const state& x, matrix& J, double, state& dfdt) {
    const double ld = M.log_derivative(x(2));
    J.clear();
    J(0, 1) = 1.0;
    J(1, 0) = fp(x(0));
    J(1, 1) = -k_m * ld;
    J(1, 2) = -k_m * (M.second_ratio(x(2)) - ld * ld) * x(1);
    dfdt.clear();
  };

  const double r_end = M.complete() ? opts.r_cap : std::min(opts.r_cap, M.r_max() * (1 - 1e-9));
  auto stepper = odeint::make_controlled<odeint::rosenbrock4<double>>(opts.abs_tol, opts.rel_tol);
  state x(3);
  x(0) = 0.0;
  x(1) = delta;
  x(2) = r0;
  double r = r0;
  double dt = 1e-4 * std::max(1.0, r0);
  auto rhs = [&](double q, double u, double du) { return f(u) - k_m * M.log_derivative(q) * du; };
  std::vector<Sample> samples{{r, x(0), x(1), rhs(r, x(0), x(1))}};
  bool blew_up = false;
  long steps = 0;
  while (r < r_end) {
    dt = std::min(dt, r_end - r);
    if (dt < 1e-13 * std::max(1.0, r)) {
      v.status = Status::Inconclusive;
      v.note = "step size underflow at r = " + std::to_string(r);
      v.diagnostics["r_stop"] = r;
      return v;
    }
    if (stepper.try_step(std::make_pair(sys, jac), x, r, dt) == odeint::fail) continue;
    ++steps;
    samples.push_back({r, x(0), x(1), rhs(r, x(0), x(1))});
    if (!std::isfinite(x(0)) || x(0) > opts.blowup) {
      blew_up = true;
      break;
    }
  }
  v.diagnostics["steps"] = static_cast<double>(steps);
  v.diagnostics["r_reached"] = r;
  v.diagnostics["u_reached"] = x(0);

  auto w = std::make_shared<Witness>(Witness{std::move(samples)});
  const double lo = r0;
  const double hi = w->s.back().r;
  v.witness = RadialFunction(
      [w](double q) { return w->value(q); }, [w](double q) { return w->slope(q); },
      [w, f, k_m, M](double q) { return f(w->value(q)) - k_m * M.log_derivative(q) * w->slope(q); },
      lo, hi, "ode-witness");

  if (blew_up) {
    v.status = Status::Holds;
    v.note = "u exceeded the blow-up threshold at r = " + std::to_string(r);
    return v;
  }
  const double a = w->slope(0.5 * hi);
  const double b = w->slope(hi);
  const double slope = (a > 0 && b > 0) ? std::log(b / a) / std::log(2.0) : -kInf;
  v.diagnostics["log_slope_du"] = slope;
  if (slope < -1.0 - opts.slope_margin) {
    v.status = Status::Fails;
    const double tail = std::isfinite(slope) ? b * hi / (-slope - 1.0) : 0.0;
    v.diagnostics["u_sup_estimate"] = x(0) + tail;
    v.note = "u stays bounded (u' decays like r^" + std::to_string(slope) +
             "): a positive bounded solution of Delta u >= f(u) exists";
  } else {
    v.status = Status::Holds;
    v.note = "u grows without bound on this family";
  }
  return v;
}

}  // namespace mpak::manifold
