#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpak/cli/app.hpp"

namespace mpak::cli {

/// Output of one command body: resolved inputs, result document and grid output.
struct Context {
  Json inputs = Json::object();
  Json result = Json::object();
  std::vector<std::string> statuses;  // verdicts consulted by --expect
  std::string csv;
  Json seeds = Json::object();
  Json tolerances = Json::object();
  int exit_code = kOk;
};

struct PolicyArgs {
  std::string horizons = "1e2,1e3,1e4,1e5,1e6";
  int slope_window = 3;
  double diverge_ratio = 0.9;
  double converge_ratio = 0.5;
};

struct ClassifyArgs {
  std::string manifold;
  double q = 2.0;
  double r0 = 1.0;
  double delta = 0.1;
  double ode_rcap = 100.0;
  double ode_margin = 0.1;
  PolicyArgs policy;
};

struct CapacityArgs {
  std::string manifold;
  double r0 = 1.0;
  std::string r1 = "2";
  std::string q = "2";
  int n = 400;
  bool no_omega = false;
};

struct PotentialArgs {
  std::string kind;
  std::string manifold;
  double r0 = 1.0;
  double r1 = 0.0;  // end of the CSV sample; 0 selects 10 r0 (complete) or the midpoint to R_max
  int n = 200;
  double p = 2.0;
  std::string w;
  std::string G = "4*(1+t)";
  std::string flavor = "yau";
  int samples = 400;
  PolicyArgs policy;
};

struct SolveArgs {
  std::string subeq;
  std::string manifold;
  std::string domain = "1,2";
  std::string bc = "1,0";
  int n = 200;
  std::string obstacle;
  std::string exact;
  bool geometric = false;
  double tol = 1e-10;
  int max_sweeps = 5000;
  bool backward = false;
  bool no_newton = false;
  double check_tol = 1e-9;
};

struct StackArgs {
  std::string subeq;
  std::string manifold;
  double r_K = 1.0;
  std::string h = "-log(1+r)";
  double epsilon = 0.1;
  int levels = 3;
  int n = 2000;
  bool uniform = false;
  int max_extensions = 24;
  double stall_change = 0.01;
  std::string schedule;
  double tol = 1e-10;
};

struct SimulateArgs {
  std::string manifold;
  double r_start = 1.0;
  double T = 2.0;
  int paths = 10000;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double eps_floor = 1e-4;
  double peclet = 10.0;
  double r_explode = 0.0;
  int threads = 0;
  bool no_ode = false;
  double delta = 0.1;
};

struct JetsArgs {
  std::string action;
  std::string subeq;
  std::string with;
  std::string cone;
  int m = 2;
  int k = 1;
  std::string matrix;
  double lo = 1.0;
  double hi = 1.0;
  int samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  double cap = 1e6;
};

void classify(const ClassifyArgs& a, Context& c);
void capacity(const CapacityArgs& a, Context& c);
void potential(const PotentialArgs& a, Context& c);
void solve(const SolveArgs& a, Context& c);
void stack(const StackArgs& a, Context& c);
void simulate(const SimulateArgs& a, Context& c);
void jets_command(const JetsArgs& a, Context& c);

}  // namespace mpak::cli
