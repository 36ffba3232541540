#include "mpak/manifold/brownian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

#include "mpak/core/error.hpp"
#include "mpak/manifold/divergence.hpp"

namespace mpak::manifold {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void wilson_interval(int k, int n, double& lo, double& hi) {
  if (n <= 0) {
    lo = 0.0;
    hi = 1.0;
    return;
  }
  const double z = 1.959963984540054;
  const double p = static_cast<double>(k) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4.0 * n * n)) / denom;
  lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
  hi = k == n ? 1.0 : std::min(1.0, centre + half);
}

namespace {

enum class Outcome { Survived, Exploded, ExitNoCertificate, Overflow };

// Time the drift alone needs to carry a path from R to the end of the model,
// int_R^{R_max} dr / b; +inf unless certified finite.
double escape_time(const ModelManifold& M, double R) {
  const double k = M.dim() - 1;
  const LogIntegrand inv_b = [M, k](double r) {
    const double b = k * M.log_derivative(r);
    return b > 0.0 ? -std::log(b) : kInf;
  };
  DivergencePolicy p;
  if (M.complete()) {
    p.horizons.clear();
    for (int j = 0; j < 5; ++j) p.horizons.push_back(R * std::pow(10.0, j + 1));
  }
  const TailReport t = classify_tail(inv_b, R, M.r_max(), p);
  if (t.tail != Tail::Convergent) return kInf;
  return std::exp(t.log_partial);
}

Outcome run_path(const ModelManifold& M, const BrownianOptions& o, double r_explode,
                 double escape, std::uint64_t stream) {
  std::mt19937_64 rng(stream);
  std::normal_distribution<double> n01;
  const double k = M.dim() - 1;
  double r = o.r_start;
  double t = 0.0;
  while (t < o.T) {
    const double b = k * M.log_derivative(r);
    if (!std::isfinite(b)) return Outcome::Overflow;
    double dt = std::min(o.dt, o.T - t);
    if (b != 0.0) dt = std::min(dt, 0.01 * r / std::abs(b));
    dt = std::max(dt, 1e-14);
    r += b * dt + std::sqrt(2.0 * dt) * n01(rng);
    t += dt;
    if (r < o.eps_floor) r = 2.0 * o.eps_floor - r;
    if (r >= r_explode) {
      const double bR = k * M.log_derivative(r_explode);
      if (!std::isfinite(bR)) return Outcome::Overflow;
      const bool certified = bR * r_explode / 2.0 >= o.peclet && t + escape <= o.T;
      return certified ? Outcome::Exploded : Outcome::ExitNoCertificate;
    }
  }
  return Outcome::Survived;
}

}  // namespace

BrownianResult brownian_explosion_mc(const ModelManifold& M, BrownianOptions o) {
  if (o.n_paths < 100) throw ParameterError("Monte Carlo needs at least 100 paths");
  if (!(o.r_start > 0.0) || !(o.r_start < M.r_max())) throw ParameterError("r_start outside the model");
  if (!(o.T >= 0.0)) throw ParameterError("T must be nonnegative");
  if (!(o.eps_floor > 0.0) || !(o.eps_floor < o.r_start)) throw ParameterError("bad reflection floor");
  BrownianResult res;
  res.n_paths = o.n_paths;
  res.r_explode = o.r_explode > 0.0 ? o.r_explode : std::max(1e3, 10.0 * o.r_start);
  if (!M.complete()) res.r_explode = std::min(res.r_explode, M.r_max() * (1 - 1e-9));
  if (o.T == 0.0) {
    wilson_interval(0, o.n_paths, res.ci_low, res.ci_high);
    return res;
  }

  res.escape_time = escape_time(M, res.r_explode);

  int threads = o.threads > 0 ? o.threads : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("MPAK_THREADS")) {
    const int c = std::atoi(cap);
    if (c > 0) threads = std::min(threads, c);
  }
  threads = std::clamp(threads, 1, o.n_paths);

  std::vector<Outcome> outcomes(static_cast<std::size_t>(o.n_paths));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < o.n_paths;)
      outcomes[static_cast<std::size_t>(i)] =
          run_path(M, o, res.r_explode, res.escape_time, splitmix64(o.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (Outcome out : outcomes) {
    if (out == Outcome::Exploded || out == Outcome::Overflow) ++res.exploded;
    if (out == Outcome::Overflow) ++res.overflow_paths;
    if (out == Outcome::ExitNoCertificate) ++res.exits_without_certificate;
  }
  res.explosion_fraction = static_cast<double>(res.exploded) / o.n_paths;
  wilson_interval(res.exploded, o.n_paths, res.ci_low, res.ci_high);
  return res;
}

}  // namespace mpak::manifold
