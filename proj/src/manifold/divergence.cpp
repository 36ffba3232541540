#include "mpak/manifold/divergence.hpp"

#include <cmath>

#include "mpak/core/error.hpp"
#include "mpak/manifold/verdict.hpp"

namespace mpak::manifold {

std::string to_string(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Tail t) {
  switch (t) {
    case Tail::Divergent: return "divergent";
    case Tail::Convergent: return "convergent";
    case Tail::Undecided: return "undecided";
  }
  return "?";
}

void DivergencePolicy::validate() const {
  if (horizons.size() < 3) throw ParameterError("divergence policy needs at least 3 horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (!(horizons[i] > horizons[i - 1]))
      throw ParameterError("divergence horizons must be strictly increasing");
  if (slope_window < 1) throw ParameterError("slope window must be positive");
  if (!(converge_ratio < diverge_ratio)) throw ParameterError("thresholds overlap");
}

std::vector<double> DivergencePolicy::ladder(double r0, double r_max) const {
  validate();
  std::vector<double> out;
  if (r_max == kInf) {
    for (double h : horizons)
      if (h > r0) out.push_back(h);
    return out;
  }
  const double gap = r_max - r0;
  for (std::size_t k = 0; k < horizons.size(); ++k)
    out.push_back(r_max - gap * std::pow(10.0, -static_cast<double>(k + 1)));
  return out;
}

Tail decide(const std::vector<double>& log_inc, const DivergencePolicy& policy,
            std::vector<double>* ratios_out) {
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < log_inc.size(); ++k) {
    const double a = log_inc[k];
    const double b = log_inc[k + 1];
    double rho;
    if (b == -kInf)
      rho = 0.0;
    else if (a == -kInf)
      rho = kInf;
    else
      rho = std::exp(b - a);
    ratios.push_back(rho);
  }
  if (ratios_out) *ratios_out = ratios;
  const int w = std::min<int>(policy.slope_window, static_cast<int>(ratios.size()));
  if (w == 0) return Tail::Undecided;
  bool all_div = true;
  bool all_conv = true;
  for (int i = static_cast<int>(ratios.size()) - w; i < static_cast<int>(ratios.size()); ++i) {
    if (!(ratios[i] >= policy.diverge_ratio)) all_div = false;
    if (!(ratios[i] <= policy.converge_ratio)) all_conv = false;
  }
  // increments that vanish identically count as convergent
  bool tail_zero = true;
  for (int i = static_cast<int>(log_inc.size()) - w; i < static_cast<int>(log_inc.size()); ++i)
    if (log_inc[i] != -kInf) tail_zero = false;
  if (tail_zero) return Tail::Convergent;
  if (all_div) return Tail::Divergent;
  if (all_conv) return Tail::Convergent;
  return Tail::Undecided;
}

TailReport classify_tail(const LogIntegrand& log_f, double r0, double r_max,
                         const DivergencePolicy& policy) {
  TailReport rep;
  rep.horizons = policy.ladder(r0, r_max);
  if (rep.horizons.size() < 3) throw ParameterError("divergence horizons lie below r0");
  double partial = log_integral(log_f, r0, rep.horizons.front());
  for (std::size_t k = 0; k + 1 < rep.horizons.size(); ++k) {
    const double inc = log_integral(log_f, rep.horizons[k], rep.horizons[k + 1]);
    rep.log_increments.push_back(inc);
    partial = log_add(partial, inc);
  }
  rep.log_partial = partial;
  rep.tail = decide(rep.log_increments, policy, &rep.ratios);
  return rep;
}

}  // namespace mpak::manifold
