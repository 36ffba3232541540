#include "mpak/manifold/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mpak::manifold {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> breakpoints(double a, double b) {
  std::vector<double> pts{a, b};
  const double w = b - a;
  for (int i = 1; i <= 48; ++i) {
    const double d = w * std::ldexp(1.0, -i);
    pts.push_back(a + d);
    pts.push_back(b - d);
  }
  if (a > 0.0)
    for (double x = 2.0 * a; x < b; x *= 2.0) pts.push_back(x);
  else
    for (double x = 1.0; x < b; x *= 2.0) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double x : pts) {
    if (x < a || x > b) continue;
    if (!out.empty() && x - out.back() <= 1e-14 * std::abs(x)) continue;
    out.push_back(x);
  }
  if (out.back() != b) out.back() = b;
  return out;
}

double sampled_max(const LogIntegrand& log_f, double a, double b, double* lo = nullptr) {
  double hi = kNegInf;
  double low = std::numeric_limits<double>::infinity();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto take = [&](double x) {
    const double v = log_f(x);
    if (std::isnan(v)) return;
    hi = std::max(hi, v);
    low = std::min(low, v);
  };
  for (int i = 0; i <= 16; ++i) take(a + (b - a) * i / 16.0);
  for (double z : {-0.99, -0.9, -0.5, 0.5, 0.9, 0.99}) take(mid + z * half);
  if (lo) *lo = low;
  return hi;
}

double gk_panel(const LogIntegrand& log_f, double a, double b, double shift, double rel_tol) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // integrate over the reference interval so the tolerance test is width-independent
  auto f = [&](double t) {
    const double v = log_f(mid + half * t);
    if (std::isnan(v)) return 0.0;
    return std::exp(v - shift);
  };
  // subpanels narrower than ~1e3 ulps only resolve rounding staircases
  const double ulps = half / (std::numeric_limits<double>::epsilon() * std::max(std::abs(mid), 1e-300));
  const unsigned depth = static_cast<unsigned>(std::clamp(std::floor(std::log2(ulps / 1e3)), 0.0, 12.0));
  double err = 0.0;
  const double I =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -1.0, 1.0, depth, rel_tol, &err);
  if (!(I > 0.0)) return kNegInf;
  return std::log(I) + std::log(half) + shift;
}

// Panels whose integrand spans more than kSpan in log are bisected; halves lying kPrune
// below their sibling are dropped.
constexpr double kSpan = 40.0;
constexpr double kPrune = 50.0;

double panel(const LogIntegrand& log_f, double a, double b, double rel_tol, double shift,
             double low, int depth) {
  if (shift == kNegInf) return kNegInf;
  if (!std::isfinite(shift)) return shift;
  if (shift - low <= kSpan || depth >= 60) return gk_panel(log_f, a, b, shift, rel_tol);
  // keep only the sample gaps next to values within kPrune of the maximum
  constexpr int kN = 16;
  int first = kN, last = 0;
  for (int i = 0; i <= kN; ++i) {
    const double v = log_f(a + (b - a) * i / kN);
    if (v >= shift - kPrune) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  const double na = first > kN - 1 ? a : a + (b - a) * std::max(first - 1, 0) / kN;
  const double nb = last < 1 ? b : a + (b - a) * std::min(last + 1, kN) / kN;
  if (first <= last && (na > a || nb < b)) {
    double nlow = 0.0;
    const double nshift = sampled_max(log_f, na, nb, &nlow);
    return panel(log_f, na, nb, rel_tol, nshift, nlow, depth + 1);
  }
  const double mid = 0.5 * (a + b);
  double left_low = 0.0, right_low = 0.0;
  const double left = sampled_max(log_f, a, mid, &left_low);
  const double right = sampled_max(log_f, mid, b, &right_low);
  double total = kNegInf;
  if (left >= right - kPrune)
    total = log_add(total, panel(log_f, a, mid, rel_tol, left, left_low, depth + 1));
  if (right >= left - kPrune)
    total = log_add(total, panel(log_f, mid, b, rel_tol, right, right_low, depth + 1));
  return total;
}

double panel(const LogIntegrand& log_f, double a, double b, double rel_tol) {
  double low = 0.0;
  const double shift = sampled_max(log_f, a, b, &low);
  return panel(log_f, a, b, rel_tol, shift, low, 0);
}

}  // namespace

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  if (!std::isfinite(a)) return a;
  return a + std::log1p(std::exp(b - a));
}

double log_integral(const LogIntegrand& log_f, double a, double b, double rel_tol) {
  if (!(b > a)) return kNegInf;
  const auto pts = breakpoints(a, b);
  // bound each panel by its sampled maximum times its width; skip negligible ones
  std::vector<double> bound(pts.size() - 1);
  double best = kNegInf;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    bound[i] = sampled_max(log_f, pts[i], pts[i + 1]) + std::log(pts[i + 1] - pts[i]);
    if (!std::isnan(bound[i])) best = std::max(best, bound[i]);
  }
  double total = kNegInf;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(bound[i] < best - kPrune)) total = log_add(total, panel(log_f, pts[i], pts[i + 1], rel_tol));
  return total;
}

std::vector<double> log_cumulative_integral(const LogIntegrand& log_f,
                                            const std::vector<double>& xs, double rel_tol) {
  std::vector<double> out(xs.size(), kNegInf);
  for (std::size_t i = 1; i < xs.size(); ++i)
    out[i] = log_add(out[i - 1], panel(log_f, xs[i - 1], xs[i], rel_tol));
  return out;
}

}  // namespace mpak::manifold
