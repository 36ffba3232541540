#include "mpak/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mpak/cli/output.hpp"
#include "mpak/core/error.hpp"

namespace mpak::cli {

namespace {

struct Common {
  std::string output;
  std::string csv;
  std::string manifest;
  std::string expect;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.output, "JSON result file (stdout if omitted)");
  sub->add_option("--csv", c.csv, "grid output as CSV with header r,u");
  sub->add_option("--manifest", c.manifest, "manifest path (default <output>.manifest.json)");
  sub->add_option("--expect", c.expect, "exit 1 unless the verdicts match")
      ->check(CLI::IsMember({"holds", "fails"}));
}

void add_policy(CLI::App* sub, PolicyArgs& p) {
  sub->add_option("--horizons", p.horizons, "divergence horizons")->capture_default_str();
  sub->add_option("--slope-window", p.slope_window)->capture_default_str();
  sub->add_option("--diverge-ratio", p.diverge_ratio)->capture_default_str();
  sub->add_option("--converge-ratio", p.converge_ratio)->capture_default_str();
}

struct Args {
  Common common;
  ClassifyArgs classify;
  CapacityArgs capacity;
  PotentialArgs potential;
  SolveArgs solve;
  StackArgs stack;
  SimulateArgs simulate;
  JetsArgs jets;
  std::string manifest;  // replay
};

void build_app(CLI::App& app, Args& a) {
  app.require_subcommand(1);
  auto& C = a.common;

  auto* cl = app.add_subcommand("classify", "parabolicity, stochastic and geodesic completeness battery");
  cl->add_option("--manifold", a.classify.manifold)->required();
  cl->add_option("--q", a.classify.q, "capacity exponent")->capture_default_str();
  cl->add_option("--r0", a.classify.r0, "radius of the compact set")->capture_default_str();
  cl->add_option("--delta", a.classify.delta, "initial slope of the ODE witness")->capture_default_str();
  cl->add_option("--ode-rcap", a.classify.ode_rcap)->capture_default_str();
  cl->add_option("--ode-margin", a.classify.ode_margin)->capture_default_str();
  add_policy(cl, a.classify.policy);
  add_common(cl, C);

  auto* ca = app.add_subcommand("capacity", "q-capacity or infinity-capacity of (B_r0, B_r1)");
  ca->add_option("--manifold", a.capacity.manifold)->required();
  ca->add_option("--r0", a.capacity.r0)->capture_default_str();
  ca->add_option("--r1", a.capacity.r1, "outer radius (or inf)")->capture_default_str();
  ca->add_option("--q", a.capacity.q, "exponent > 1 or inf")->capture_default_str();
  ca->add_option("--n", a.capacity.n, "capacitor grid nodes")->capture_default_str();
  ca->add_flag("--no-omega", a.capacity.no_omega, "report the capacity without the sphere area");
  add_common(ca, C);

  auto* po = app.add_subcommand("potential", "Evans, Khas'minskii, eikonal and polar potentials");
  po->add_option("kind", a.potential.kind)
      ->required()
      ->check(CLI::IsMember({"evans", "khasminskii", "eikonal", "polar", "omori-yau-check"}));
  po->add_option("--manifold", a.potential.manifold)->required();
  po->add_option("--r0", a.potential.r0)->capture_default_str();
  po->add_option("--r1", a.potential.r1, "end of the CSV sample")->capture_default_str();
  po->add_option("--n", a.potential.n, "CSV sample nodes")->capture_default_str();
  po->add_option("--p", a.potential.p, "polar exponent")->capture_default_str();
  po->add_option("--w", a.potential.w, "candidate potential in r");
  po->add_option("--G", a.potential.G, "growth function in t")->capture_default_str();
  po->add_option("--flavor", a.potential.flavor)->capture_default_str();
  po->add_option("--samples", a.potential.samples)->capture_default_str();
  add_policy(po, a.potential.policy);
  add_common(po, C);

  auto* so = app.add_subcommand("solve", "Dirichlet or obstacle problem on a radial grid");
  so->add_option("--subeq", a.solve.subeq)->required();
  so->add_option("--manifold", a.solve.manifold)->required();
  so->add_option("--domain", a.solve.domain, "r0,r1")->capture_default_str();
  so->add_option("--bc", a.solve.bc, "u(r0),u(r1)")->capture_default_str();
  so->add_option("--n", a.solve.n)->capture_default_str();
  so->add_option("--obstacle", a.solve.obstacle, "obstacle in r");
  so->add_option("--exact", a.solve.exact, "reference solution in r");
  so->add_flag("--geometric", a.solve.geometric, "grid uniform in log r");
  so->add_option("--tol", a.solve.tol)->capture_default_str();
  so->add_option("--max-sweeps", a.solve.max_sweeps)->capture_default_str();
  so->add_flag("--backward", a.solve.backward);
  so->add_flag("--no-newton", a.solve.no_newton);
  so->add_option("--check-tol", a.solve.check_tol)->capture_default_str();
  add_common(so, C);

  auto* st = app.add_subcommand("stack", "stacked obstacle construction of a Khas'minskii potential");
  st->add_option("--subeq", a.stack.subeq)->required();
  st->add_option("--manifold", a.stack.manifold)->required();
  st->add_option("--rK", a.stack.r_K)->capture_default_str();
  st->add_option("--decay", a.stack.h, "decay profile h in r")->capture_default_str();
  st->add_option("--epsilon", a.stack.epsilon)->capture_default_str();
  st->add_option("--levels", a.stack.levels)->capture_default_str();
  st->add_option("--n", a.stack.n)->capture_default_str();
  st->add_flag("--uniform", a.stack.uniform, "uniform instead of geometric grids");
  st->add_option("--max-extensions", a.stack.max_extensions)->capture_default_str();
  st->add_option("--stall-change", a.stack.stall_change)->capture_default_str();
  st->add_option("--schedule", a.stack.schedule, "outer radii R_0,R_1,...");
  st->add_option("--tol", a.stack.tol)->capture_default_str();
  add_common(st, C);

  auto* si = app.add_subcommand("simulate", "Brownian explosion Monte Carlo with the ODE witness");
  si->add_option("--manifold", a.simulate.manifold)->required();
  si->add_option("--r-start", a.simulate.r_start)->capture_default_str();
  si->add_option("--T", a.simulate.T)->capture_default_str();
  si->add_option("--paths", a.simulate.paths)->capture_default_str();
  si->add_option("--seed", a.simulate.seed)->capture_default_str();
  si->add_option("--dt", a.simulate.dt)->capture_default_str();
  si->add_option("--eps-floor", a.simulate.eps_floor)->capture_default_str();
  si->add_option("--peclet", a.simulate.peclet)->capture_default_str();
  si->add_option("--r-explode", a.simulate.r_explode, "0 selects max(1e3, 10 r_start)")->capture_default_str();
  si->add_option("--threads", a.simulate.threads, "0: hardware, capped by MPAK_THREADS")->capture_default_str();
  si->add_flag("--no-ode", a.simulate.no_ode);
  si->add_option("--delta", a.simulate.delta)->capture_default_str();
  add_common(si, C);

  auto* je = app.add_subcommand("jets", "subequation algebra on sampled jets");
  je->add_option("action", a.jets.action)
      ->required()
      ->check(CLI::IsMember({"dual", "riesz", "garding", "pucci", "duality-suite", "monotonicity"}));
  je->add_option("--subeq", a.jets.subeq);
  je->add_option("--with", a.jets.with, "second subequation for duality-suite");
  je->add_option("--cone", a.jets.cone, "monotonicity cone");
  je->add_option("--m", a.jets.m)->capture_default_str();
  je->add_option("--k", a.jets.k)->capture_default_str();
  je->add_option("--matrix", a.jets.matrix, "rows separated by ';'");
  je->add_option("--lo", a.jets.lo)->capture_default_str();
  je->add_option("--hi", a.jets.hi)->capture_default_str();
  je->add_option("--samples", a.jets.samples)->capture_default_str();
  je->add_option("--seed", a.jets.seed)->capture_default_str();
  je->add_option("--tol", a.jets.tol)->capture_default_str();
  je->add_option("--cap", a.jets.cap)->capture_default_str();
  add_common(je, C);

  auto* re = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  re->add_option("manifest", a.manifest)->required();
}

bool expectation_met(const std::string& expect, const std::vector<std::string>& statuses) {
  const bool any_fails = std::find(statuses.begin(), statuses.end(), "Fails") != statuses.end();
  if (expect == "holds") return !any_fails;
  if (expect == "fails") return any_fails;
  return true;
}

}  // namespace

Execution execute(const std::vector<std::string>& args) {
  Execution ex;
  CLI::App app("model-manifold potential theory toolkit", "mpak");
  Args a;
  build_app(app, a);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    ex.message = subs.empty() ? app.help() : subs.front()->help();
    return ex;
  } catch (const CLI::ParseError& e) {
    ex.exit_code = kUsage;
    ex.message = e.what();
    return ex;
  }
  const auto* sub = app.get_subcommands().front();
  ex.command = sub->get_name();
  if (ex.command == "replay") return replay(a.manifest);

  Context c;
  try {
    if (ex.command == "classify") classify(a.classify, c);
    if (ex.command == "capacity") capacity(a.capacity, c);
    if (ex.command == "potential") potential(a.potential, c);
    if (ex.command == "solve") solve(a.solve, c);
    if (ex.command == "stack") stack(a.stack, c);
    if (ex.command == "simulate") simulate(a.simulate, c);
    if (ex.command == "jets") jets_command(a.jets, c);
  } catch (const NumericalError& e) {
    ex.exit_code = kNumerical;
    ex.message = e.what();
    return ex;
  } catch (const Error& e) {
    ex.exit_code = kUsage;
    ex.message = e.what();
    return ex;
  }
  if (!a.common.csv.empty() && c.csv.empty()) {
    ex.exit_code = kUsage;
    ex.message = "--csv: " + ex.command + " produced no grid output";
    return ex;
  }
  ex.payload = {{"schema", kSchema}, {"command", ex.command}, {"inputs", c.inputs}, {"result", c.result}};
  ex.json = dump(ex.payload);
  ex.csv = c.csv;
  ex.seeds = c.seeds;
  ex.tolerances = c.tolerances;
  ex.json_path = a.common.output.empty() ? "-" : a.common.output;
  ex.csv_path = a.common.csv;
  ex.manifest_path = a.common.manifest;
  if (ex.manifest_path.empty()) {
    if (!a.common.output.empty())
      ex.manifest_path = a.common.output + ".manifest.json";
    else if (!a.common.csv.empty())
      ex.manifest_path = a.common.csv + ".manifest.json";
  }
  ex.exit_code = c.exit_code;
  if (ex.exit_code == kOk && !expectation_met(a.common.expect, c.statuses)) ex.exit_code = kExpectationFailed;
  return ex;
}

Json make_manifest(const std::vector<std::string>& args, const Execution& ex, double wall_clock) {
  Json outputs = Json::array();
  outputs.push_back({{"kind", "json"}, {"path", ex.json_path}, {"sha256", sha256_hex(ex.json)}});
  if (!ex.csv_path.empty())
    outputs.push_back({{"kind", "csv"}, {"path", ex.csv_path}, {"sha256", sha256_hex(ex.csv)}});
  return {{"schema", kSchema},
          {"tool", "mpak"},
          {"version", kVersion},
          {"command", ex.command},
          {"argv", args},
          {"inputs", ex.payload.at("inputs")},
          {"seeds", ex.seeds},
          {"tolerances", ex.tolerances},
          {"exit_code", ex.exit_code},
          {"wall_clock_seconds", wall_clock},
          {"outputs", outputs}};
}

Execution replay(const std::string& manifest_path) {
  Execution out;
  out.command = "replay";
  Json m;
  try {
    m = Json::parse(read_file(manifest_path));
  } catch (const Json::exception& e) {
    out.exit_code = kUsage;
    out.message = std::string("manifest: ") + e.what();
    return out;
  } catch (const Error& e) {
    out.exit_code = kUsage;
    out.message = e.what();
    return out;
  }
  if (!m.contains("schema") || m["schema"] != kSchema || !m.contains("argv") || !m.contains("outputs")) {
    out.exit_code = kUsage;
    out.message = "manifest: not an " + std::string(kSchema) + " manifest";
    return out;
  }
  const auto args = m["argv"].get<std::vector<std::string>>();
  const Execution ex = execute(args);
  Json checks = Json::array();
  bool all = !ex.json.empty() && ex.exit_code == m.value("exit_code", 0);
  for (const auto& o : m["outputs"]) {
    const std::string kind = o.at("kind");
    const std::string actual = sha256_hex(kind == "csv" ? ex.csv : ex.json);
    const bool match = actual == o.at("sha256").get<std::string>();
    all = all && match;
    checks.push_back({{"kind", kind}, {"path", o.at("path")}, {"expected", o.at("sha256")}, {"actual", actual},
                      {"match", match}});
  }
  out.payload = {{"schema", kSchema},
                 {"command", "replay"},
                 {"inputs", {{"manifest", manifest_path}}},
                 {"result", {{"replayed", m["command"]},
                             {"exit_code", ex.exit_code},
                             {"reproduced", all},
                             {"outputs", checks}}}};
  out.json = dump(out.payload);
  out.json_path = "-";
  out.exit_code = all ? kOk : kNumerical;
  if (!all && !ex.message.empty()) out.message = ex.message;
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const Execution ex = execute(args);
  if (!ex.message.empty()) (ex.exit_code == kOk ? out : err) << ex.message << (ex.json.empty() ? "\n" : "");
  if (ex.json.empty()) return ex.exit_code;
  try {
    if (ex.json_path == "-")
      out << ex.json;
    else
      write_atomic(ex.json_path, ex.json);
    if (!ex.csv_path.empty()) write_atomic(ex.csv_path, ex.csv);
    if (!ex.manifest_path.empty()) {
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_atomic(ex.manifest_path, dump(make_manifest(args, ex, wall)));
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  return ex.exit_code;
}

}  // namespace mpak::cli
