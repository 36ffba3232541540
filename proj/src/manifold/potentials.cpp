#include "mpak/manifold/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpak/core/error.hpp"

namespace mpak::manifold {

namespace {

// log g^{power}, -inf where g <= 0
LogIntegrand log_g_power(const ModelManifold& M, double power) {
  return [M, power](double s) {
    const auto gl = M.g_log(s);
    if (gl.sign <= 0) return power > 0 ? -kInf : kInf;
    return power * gl.log_abs;
  };
}

std::vector<double> geometric(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return out;
}

void record_tail(Verdict& v, const TailReport& t, const std::string& prefix) {
  v.diagnostics[prefix + "log_partial"] = t.log_partial;
  v.diagnostics[prefix + "last_horizon"] = t.horizons.back();
  for (std::size_t i = 0; i < t.ratios.size(); ++i)
    v.diagnostics[prefix + "ratio_" + std::to_string(i)] = t.ratios[i];
}

Status from_tail(Tail t) {
  switch (t) {
    case Tail::Divergent: return Status::Holds;
    case Tail::Convergent: return Status::Fails;
    case Tail::Undecided: return Status::Inconclusive;
  }
  return Status::Inconclusive;
}

// Primitive F(r) = int_{r0}^r exp(log_f) with F' = exp(log_f), F'' from d log f / dr.
RadialFunction primitive(const ModelManifold& M, double r0, double power, std::string label) {
  const LogIntegrand lf = log_g_power(M, power);
  auto val = [lf, r0](double r) {
    if (r == r0) return 0.0;
    const double s = std::exp(log_integral(lf, std::min(r0, r), std::max(r0, r)));
    return r >= r0 ? s : -s;
  };
  auto d1 = [lf](double r) { return std::exp(lf(r)); };
  auto d2 = [lf, M, power](double r) { return power * M.log_derivative(r) * std::exp(lf(r)); };
  return RadialFunction(val, d1, d2, r0, M.r_max(), std::move(label));
}

}  // namespace

CapacityResult q_capacity(const ModelManifold& M, double r0, double r1, double q) {
  if (!(q > 1.0)) throw ParameterError("q-capacity needs q > 1");
  if (!(r0 > 0.0) || !(r1 > r0) || !(r1 < M.r_max()) || !std::isfinite(r1))
    throw ParameterError("q-capacity needs 0 < r0 < r1 < R_max");
  const int m = M.dim();
  const double alpha = (m - 1) / (q - 1);
  const LogIntegrand lf = log_g_power(M, -alpha);
  const double logI = log_integral(lf, r0, r1, 1e-13);

  auto val = [lf, logI, r0, r1](double r) {
    if (r <= r0) return 1.0;
    if (r >= r1) return 0.0;
    return std::exp(log_integral(lf, r, r1, 1e-13) - logI);
  };
  auto d1 = [lf, logI](double r) { return -std::exp(lf(r) - logI); };
  auto d2 = [lf, logI, alpha, M](double r) {
    return alpha * M.log_derivative(r) * std::exp(lf(r) - logI);
  };
  RadialFunction u(val, d1, d2, r0, r1, "q-capacitor");

  CapacityResult res{0.0, 0.0, logI, 0.0, u};
  res.value_without_omega = std::exp((1.0 - q) * logI);
  res.value = omega(m - 1) * res.value_without_omega;

  // g^{m-1} |u'|^{q-1} must be the constant I^{1-q}; check it with difference quotients.
  const double h = 1e-4 * (r1 - r0);
  for (int i = 1; i <= 20; ++i) {
    const double r = r0 + (r1 - r0) * i / 21.0;
    const double du = (u(r + h) - u(r - h)) / (2 * h);
    const double log_flux = (m - 1) * M.g_log(r).log_abs + (q - 1) * std::log(std::abs(du));
    res.max_flux_defect =
        std::max(res.max_flux_defect, std::abs(std::expm1(log_flux - (1.0 - q) * logI)));
  }
  return res;
}

Verdict parabolicity_test(const ModelManifold& M, double q, const DivergencePolicy& policy,
                          double r0) {
  if (!(q > 1.0)) throw ParameterError("parabolicity test needs q > 1");
  const double alpha = (M.dim() - 1) / (q - 1);
  const TailReport t = classify_tail(log_g_power(M, -alpha), r0, M.r_max(), policy);
  Verdict v;
  v.status = from_tail(t.tail);
  v.witness = primitive(M, r0, -alpha, "int g^{-(m-1)/(q-1)}");
  record_tail(v, t, "");
  v.diagnostics["q"] = q;
  v.note = "int^R_max g^{-(m-1)/(q-1)} is " + to_string(t.tail);
  return v;
}

Verdict evans_potential(const ModelManifold& M, double r0, const DivergencePolicy& policy) {
  if (!(r0 > 0.0) || !(r0 < M.r_max())) throw ParameterError("Evans potential needs 0 < r0 < R_max");
  const int m = M.dim();
  const TailReport t = classify_tail(log_g_power(M, 1.0 - m), r0, M.r_max(), policy);
  Verdict v;
  v.status = from_tail(t.tail);
  v.witness = primitive(M, r0, 1.0 - m, "evans");
  record_tail(v, t, "");
  const double hi = M.complete() ? 100.0 * r0 : r0 + 0.99 * (M.r_max() - r0);
  double defect = 0.0;
  for (double r : geometric(r0 * 1.001, hi, 100))
    defect = std::max(defect, std::abs(radial_laplacian(M, *v.witness, r)));
  v.diagnostics["harmonic_defect"] = defect;
  v.note = t.tail == Tail::Divergent ? "w -> +inf: harmonic exhaustion"
                                     : "w bounded or undecided: int g^{1-m} is " + to_string(t.tail);
  return v;
}

double infinity_capacity(const ModelManifold& M, double r0, double r1) {
  if (!(r0 >= 0.0) || !(r1 > r0) || r1 > M.r_max())
    throw ParameterError("infinity capacity needs r0 < r1 <= R_max");
  if (r1 == kInf) return 0.0;
  return 1.0 / (r1 - r0);
}

Verdict khasminskii_radial_check(const ModelManifold& M, const RadialFunction& w,
                                 const expr::Expr& G, Flavor flavor,
                                 const DivergencePolicy& policy) {
  double prev = -kInf;
  for (double t : [] {
         std::vector<double> ts{0.0};
         for (double x = 1e-3; x <= 1e6; x *= 1.5) ts.push_back(x);
         return ts;
       }()) {
    const double gv = G(t);
    if (!(gv > 0.0))
      throw ParameterError("G must be positive; G(" + std::to_string(t) + ") = " +
                           std::to_string(gv));
    if (gv < prev - 1e-12 * std::abs(prev))
      throw ParameterError("G must be nondecreasing; fails near t = " + std::to_string(t));
    prev = gv;
  }
  Verdict v;
  const LogIntegrand inv_G = [&G](double s) { return -std::log(G(s)); };
  const TailReport gt = classify_tail(inv_G, 0.0, kInf, policy);
  record_tail(v, gt, "G_");

  const double lo = std::max(w.lo(), 1e-6);
  const auto ladder = policy.ladder(lo, std::min(w.hi(), M.r_max()));
  std::vector<double> log_inc;
  bool increasing = true;
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    const double d = w(ladder[k + 1]) - w(ladder[k]);
    if (!(d > 0.0)) increasing = false;
    log_inc.push_back(d > 0.0 ? std::log(d) : -kInf);
  }
  const bool exhaustion = increasing && decide(log_inc, policy) == Tail::Divergent;
  v.diagnostics["exhaustion"] = exhaustion ? 1.0 : 0.0;

  int violations = 0;
  double first_bad = kInf;
  double worst = 0.0;
  const int m = M.dim();
  for (double r : geometric(lo, ladder.back(), 400)) {
    const double wr = w(r);
    const double gw = G(wr);
    const double d1 = w.d1(r);
    const double tang = d1 == 0.0 ? 0.0 : M.log_derivative(r) * d1;
    const double second = flavor == Flavor::Yau ? w.d2(r) + (m - 1) * tang : std::max(w.d2(r), tang);
    const double excess = std::max(std::abs(d1), second) - gw;
    if (!(wr > 0.0) || excess > 1e-10 * std::max(1.0, gw)) {
      if (violations++ == 0) first_bad = r;
      worst = std::max(worst, excess);
    }
  }
  v.diagnostics["violations"] = violations;
  v.diagnostics["first_violation_radius"] = first_bad;
  v.diagnostics["worst_excess"] = worst;
  if (violations > 0) {
    v.status = Status::Fails;
    v.note = "G-bound violated from r = " + std::to_string(first_bad);
  } else if (exhaustion && gt.tail == Tail::Divergent) {
    v.status = Status::Holds;
    v.note = "bounds hold, w is an exhaustion and int ds/G diverges";
  } else {
    v.status = Status::Inconclusive;
    v.note = exhaustion ? "int ds/G not certified divergent" : "exhaustion not certified";
  }
  v.witness = w;
  return v;
}

Verdict hessian_khasminskii_check(const ModelManifold& M, const RadialFunction& w, int samples) {
  const double lo = std::max(w.lo(), 1e-6);
  const double top = std::min(w.hi(), M.r_max());
  const bool bounded = std::isfinite(top);
  std::vector<double> ladder;
  for (int k = 0; k < 10; ++k)
    ladder.push_back(bounded ? top - (top - lo) * std::ldexp(1.0, -k - 1) : lo + std::ldexp(1.0, k));
  const double hi = ladder.back();

  Verdict v;
  int violations = 0;
  double first_bad = kInf;
  for (int i = 0; i < samples; ++i) {
    const double r = lo + (hi - lo) * i / (samples - 1);
    const double wr = w(r);
    const double d1 = w.d1(r);
    const double tang = d1 == 0.0 ? 0.0 : M.log_derivative(r) * d1;
    const double tol = 1e-10 * std::max(1.0, std::abs(wr));
    const bool ok = wr < 0.0 && w.d2(r) >= wr - tol && tang >= wr - tol && std::abs(d1) <= -wr + tol;
    if (!ok && violations++ == 0) first_bad = r;
  }
  std::vector<double> log_inc;
  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    const double d = w(ladder[k]) - w(ladder[k + 1]);
    if (!(d > 0.0)) decreasing = false;
    log_inc.push_back(d > 0.0 ? std::log(d) : -kInf);
  }
  const bool exhaustion = decreasing && decide(log_inc, DivergencePolicy{}) == Tail::Divergent;
  v.diagnostics["violations"] = violations;
  v.diagnostics["first_violation_radius"] = first_bad;
  v.diagnostics["exhaustion"] = exhaustion ? 1.0 : 0.0;
  v.status = violations == 0 && exhaustion ? Status::Holds : Status::Fails;
  std::ostringstream note;
  if (violations > 0) note << violations << " radii violate Hess w >= w or |w'| <= -w, first at r = " << first_bad;
  else if (!exhaustion) note << "w does not tend to -inf";
  else note << "Hessian and gradient bounds hold; w -> -inf";
  v.note = note.str();
  v.witness = w;
  return v;
}

PolarResult polar_potential(const ModelManifold& M, double p) {
  const int m = M.dim();
  for (double r : {0.5, 1.0, 3.0})
    if (std::abs(M.g(r) - r) > 1e-14 * r || M.r_max() != kInf)
      throw ParameterError("polar potentials are provided on the Euclidean model only");
  if (!(p >= 2.0) || !(p <= m)) throw ParameterError("polar potential needs 2 <= p <= m");
  const expr::Expr psi = p == 2.0 ? expr::parse("log(r)")
                                  : -pow(expr::Expr::var("r"), expr::Expr::constant(2.0 - p));
  PolarResult res{RadialFunction::from_expr(psi, 0.0, kInf)};
  const int whole = static_cast<int>(std::floor(p));
  const double frac = p - whole;
  for (double r : geometric(1e-3, 1e3, 61)) {
    const auto eig = radial_hessian(M, res.psi, r).sorted();
    double s = 0.0;
    for (int i = 0; i < whole; ++i) s += eig[i];
    if (frac > 0.0) s += frac * eig[whole];
    const double scale = std::max(std::abs(eig.front()), std::abs(eig.back()));
    res.max_defect = std::max(res.max_defect, std::abs(s) / scale);
  }
  res.certified = res.max_defect <= 1e-10;
  res.tends_to_minus_infinity = res.psi(1e-100) < -100.0 && res.psi(1e-100) < res.psi(1e-50);
  return res;
}

}  // namespace mpak::manifold
