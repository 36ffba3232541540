#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mpak/cli/output.hpp"
#include "mpak/core/error.hpp"
#include "mpak/jets/catalog.hpp"
#include "mpak/jets/linalg.hpp"
#include "mpak/jets/structure.hpp"
#include "mpak/manifold/brownian.hpp"
#include "mpak/manifold/classifiers.hpp"
#include "mpak/manifold/potentials.hpp"
#include "mpak/solver/ahlfors.hpp"
#include "mpak/solver/perron.hpp"
#include "mpak/solver/stack.hpp"
#include "mpak/solver/viscosity.hpp"

namespace mpak::cli {

using manifold::ModelManifold;
using manifold::RadialFunction;
using manifold::Status;
using manifold::Verdict;

namespace {

manifold::DivergencePolicy make_policy(const PolicyArgs& a, Context& c) {
  manifold::DivergencePolicy p;
  p.horizons = parse_list(a.horizons);
  p.slope_window = a.slope_window;
  p.diverge_ratio = a.diverge_ratio;
  p.converge_ratio = a.converge_ratio;
  p.validate();
  c.tolerances["horizons"] = p.horizons;
  c.tolerances["slope_window"] = p.slope_window;
  c.tolerances["diverge_ratio"] = p.diverge_ratio;
  c.tolerances["converge_ratio"] = p.converge_ratio;
  return p;
}

/// Verdict as JSON, or {status: NotApplicable, note} when the test does not apply.
template <class Fn>
std::pair<Json, std::optional<Verdict>> guarded(Fn&& fn) {
  try {
    Verdict v = fn();
    return {to_json(v), std::move(v)};
  } catch (const NotApplicable& e) {
    return {Json{{"status", "NotApplicable"}, {"note", e.what()}}, std::nullopt};
  }
}

Json report_json(const jets::SampleReport& r) {
  Json j{{"samples", r.samples}, {"violations", r.violations}, {"skipped", r.skipped},
         {"inconclusive", r.inconclusive}, {"ok", r.ok()}};
  if (!r.first_violation.empty()) j["first_violation"] = r.first_violation;
  return j;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json jet_json(const jets::Jet& J) {
  Json A = Json::array();
  for (Eigen::Index i = 0; i < J.hessian.rows(); ++i) A.push_back(vector_json(J.hessian.row(i).transpose()));
  return Json{{"radius", J.radius}, {"value", J.value}, {"gradient", vector_json(J.gradient)}, {"hessian", A}};
}

const char* holds(bool ok) { return ok ? "Holds" : "Fails"; }

double max_abs_deviation(const GridFunction& u, const expr::Expr& exact) {
  double err = 0.0;
  for (int i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - exact(u.r(i))));
  return err;
}

}  // namespace

void classify(const ClassifyArgs& a, Context& c) {
  const ModelManifold M = parse_manifold(a.manifold);
  const auto policy = make_policy(a.policy, c);
  c.inputs = {{"manifold", M.spec()}, {"q", a.q}, {"r0", a.r0}, {"delta", a.delta}};
  manifold::OdeOptions ode;
  ode.r_cap = a.ode_rcap;
  ode.slope_margin = a.ode_margin;
  c.tolerances["ode_r_cap"] = ode.r_cap;
  c.tolerances["ode_slope_margin"] = ode.slope_margin;
  c.tolerances["ode_rel_tol"] = ode.rel_tol;

  const Verdict par = manifold::parabolicity_test(M, a.q, policy, a.r0);
  auto [volume_json, volume] = guarded([&] { return manifold::stochastic_completeness_volume_test(M, policy); });
  auto [ode_json, ode_v] = guarded([&] { return manifold::ahlfors_witness_ode(M, std::nullopt, a.r0, a.delta, ode); });
  // the volume test is only sufficient; the ODE witness decides both ways on models
  Status stochastic = Status::Inconclusive;
  if (volume && volume->status == Status::Holds)
    stochastic = Status::Holds;
  else if (ode_v)
    stochastic = ode_v->status;
  const double inf_cap = manifold::infinity_capacity(M, a.r0, M.r_max());
  const Verdict eik = solver::eikonal_potential(M, a.r0);

  c.result["parabolic"] = manifold::to_string(par.status);
  c.result["stochastically_complete"] = manifold::to_string(stochastic);
  c.result["infinity_parabolic"] = holds(inf_cap == 0.0);
  c.result["geodesically_complete"] = holds(M.complete());
  c.result["eikonal_potential"] = manifold::to_string(eik.status);
  c.result["details"] = {{"parabolicity", to_json(par)},
                         {"volume_test", volume_json},
                         {"ahlfors_ode", ode_json},
                         {"infinity_capacity", inf_cap},
                         {"eikonal", to_json(eik)}};
  for (const char* key : {"parabolic", "stochastically_complete", "infinity_parabolic", "geodesically_complete",
                          "eikonal_potential"})
    c.statuses.push_back(c.result[key].get<std::string>());
}

void capacity(const CapacityArgs& a, Context& c) {
  const ModelManifold M = parse_manifold(a.manifold);
  const double r1 = parse_real(a.r1);
  if (a.n < 3) throw ParameterError("capacity: --n must be at least 3");
  c.inputs = {{"manifold", M.spec()}, {"r0", a.r0}, {"r1", r1}, {"q", a.q}, {"n", a.n}, {"omega", !a.no_omega}};
  if (a.q == "inf") {
    c.result["q"] = "inf";
    c.result["capacity"] = manifold::infinity_capacity(M, a.r0, r1);
    if (std::isfinite(r1)) {
      const Grid G = Grid::make(a.r0, r1, a.n);
      const auto sol = solver::perron_obstacle_solve(
          {jets::make_subeq("inf_laplacian", {}, M.dim()), M, G, 1.0, 0.0, std::nullopt});
      const double dev = max_abs_deviation(sol.u, (expr::Expr::constant(r1) - expr::Expr::var()) /
                                                      expr::Expr::constant(r1 - a.r0));
      c.result["capacitor"] = {{"status", solver::to_string(sol.status)},
                               {"sweeps", sol.sweeps},
                               {"max_deviation_from_linear", dev}};
      c.csv = to_csv(sol.u);
      if (sol.status != solver::SolveStatus::Converged) c.exit_code = kNumerical;
    }
    return;
  }
  const double q = parse_real(a.q);
  const auto cr = manifold::q_capacity(M, a.r0, r1, q);
  c.result["q"] = q;
  c.result["capacity"] = a.no_omega ? cr.value_without_omega : cr.value;
  c.result["capacity_with_omega"] = cr.value;
  c.result["capacity_without_omega"] = cr.value_without_omega;
  c.result["log_integral"] = cr.log_integral;
  c.result["max_flux_defect"] = cr.max_flux_defect;
  c.csv = to_csv(cr.capacitor.sample(Grid::make(a.r0, r1, a.n)));
}

void potential(const PotentialArgs& a, Context& c) {
  const ModelManifold M = parse_manifold(a.manifold);
  const double r1 = a.r1 > 0.0 ? a.r1 : (M.complete() ? 10.0 * a.r0 : 0.5 * (a.r0 + M.r_max()));
  c.inputs = {{"kind", a.kind}, {"manifold", M.spec()}, {"r0", a.r0}, {"r1", r1}, {"n", a.n}};
  std::optional<RadialFunction> sample;
  if (a.kind == "evans" || a.kind == "eikonal") {
    const Verdict v = a.kind == "evans" ? manifold::evans_potential(M, a.r0, make_policy(a.policy, c))
                                        : solver::eikonal_potential(M, a.r0);
    c.result = to_json(v);
    c.statuses.push_back(manifold::to_string(v.status));
    sample = v.witness;
  } else if (a.kind == "polar") {
    c.inputs["p"] = a.p;
    const auto pr = manifold::polar_potential(M, a.p);
    c.result = {{"status", holds(pr.certified && pr.tends_to_minus_infinity)},
                {"kernel", pr.psi.label()},
                {"certified", pr.certified},
                {"max_defect", pr.max_defect},
                {"tends_to_minus_infinity", pr.tends_to_minus_infinity}};
    c.statuses.push_back(c.result["status"].get<std::string>());
    sample = pr.psi;
  } else if (a.kind == "khasminskii" || a.kind == "omori-yau-check") {
    if (a.w.empty()) throw ParameterError("potential " + a.kind + " needs --w <expr in r>");
    const auto w = RadialFunction::from_expr(expr::parse(a.w), a.r0);
    c.inputs["w"] = w.label();
    Verdict v;
    if (a.kind == "khasminskii") {
      c.inputs["samples"] = a.samples;
      v = manifold::hessian_khasminskii_check(M, w, a.samples);
    } else {
      if (a.flavor != "omori" && a.flavor != "yau") throw ParameterError("--flavor must be omori or yau");
      const auto G = expr::parse(a.G, "t");
      c.inputs["G"] = G.str();
      c.inputs["flavor"] = a.flavor;
      v = manifold::khasminskii_radial_check(M, w, G, a.flavor == "omori" ? manifold::Flavor::Omori
                                                                          : manifold::Flavor::Yau,
                                             make_policy(a.policy, c));
    }
    c.result = to_json(v);
    c.statuses.push_back(manifold::to_string(v.status));
    sample = w;
  } else {
    throw ParameterError("unknown potential kind '" + a.kind + "'");
  }
  if (sample && a.n >= 2 && r1 > a.r0) c.csv = to_csv(sample->sample(Grid::make(a.r0, r1, a.n)));
}

void solve(const SolveArgs& a, Context& c) {
  const ModelManifold M = parse_manifold(a.manifold);
  const auto F = build(parse_subeq(a.subeq), M.dim());
  const auto dom = parse_list(a.domain);
  const auto bc = parse_list(a.bc);
  if (dom.size() != 2 || bc.size() != 2) throw ParameterError("--domain and --bc take two values each");
  const Grid G = a.geometric ? Grid::make_geometric(dom[0], dom[1], a.n) : Grid::make(dom[0], dom[1], a.n);
  c.inputs = {{"subequation", subeq_record(F)}, {"manifold", M.spec()}, {"domain", dom}, {"bc", bc},
              {"n", a.n}, {"geometric", a.geometric}, {"backward", a.backward}, {"newton", !a.no_newton}};
  solver::ObstacleProblem P{F, M, G, bc[0], bc[1], std::nullopt};
  if (!a.obstacle.empty()) {
    const auto g = expr::parse(a.obstacle);
    c.inputs["obstacle"] = g.str();
    P.obstacle = RadialFunction::from_expr(g, dom[0], dom[1]).sample(G);
  }
  solver::PerronOptions opts;
  opts.tol = a.tol;
  opts.max_sweeps = a.max_sweeps;
  opts.backward = a.backward;
  opts.newton = !a.no_newton;
  c.tolerances = {{"tol", opts.tol}, {"max_sweeps", opts.max_sweeps}, {"check_tol", a.check_tol}};

  const auto sol = solver::perron_obstacle_solve(P, opts);
  const auto viol = solver::viscosity_subharmonic_check(sol.u, F, M, a.check_tol, [&](int i) {
    return sol.u[i] < P.obstacle_at(i) - 1e-12;
  });
  c.result = {{"status", solver::to_string(sol.status)},
              {"residual", sol.residual},
              {"sweeps", sol.sweeps},
              {"newton_iterations", sol.newton_iterations},
              {"contact_nodes", sol.contact_nodes},
              {"violations", static_cast<int>(viol.size())}};
  if (!a.exact.empty()) {
    const auto e = expr::parse(a.exact);
    c.inputs["exact"] = e.str();
    c.result["max_deviation"] = max_abs_deviation(sol.u, e);
  }
  c.csv = to_csv(sol.u);
  c.statuses.push_back(holds(viol.empty()));
  if (sol.status != solver::SolveStatus::Converged) c.exit_code = kNumerical;
}

void stack(const StackArgs& a, Context& c) {
  const ModelManifold M = parse_manifold(a.manifold);
  const auto F = build(parse_subeq(a.subeq), M.dim());
  const auto h = RadialFunction::from_expr(expr::parse(a.h), a.r_K);
  solver::StackOptions opts;
  opts.epsilon = a.epsilon;
  opts.max_levels = a.levels;
  opts.grid_n = a.n;
  opts.geometric_grid = !a.uniform;
  opts.max_extensions = a.max_extensions;
  opts.stall_change = a.stall_change;
  if (!a.schedule.empty()) opts.schedule = parse_list(a.schedule);
  opts.perron.tol = a.tol;
  c.inputs = {{"subequation", subeq_record(F)}, {"manifold", M.spec()}, {"r_K", a.r_K}, {"h", h.label()},
              {"epsilon", a.epsilon}, {"levels", a.levels}, {"n", a.n}, {"geometric", opts.geometric_grid},
              {"max_extensions", a.max_extensions}, {"schedule", opts.schedule}};
  c.tolerances = {{"stall_change", a.stall_change}, {"perron_tol", a.tol}};

  const auto rep = solver::khasminskii_stack(F, M, a.r_K, h, opts);
  Json levels = Json::array();
  for (const auto& L : rep.levels) {
    Json attempts = Json::array();
    for (const auto& t : L.attempts)
      attempts.push_back({{"j", t.j}, {"R", t.R}, {"delta", t.delta}, {"lower_ok", t.lower_ok}});
    levels.push_back({{"i", L.i}, {"j", L.j}, {"R", L.R}, {"delta", L.delta}, {"reach_radius", L.reach_radius},
                      {"a", L.a}, {"b", L.b}, {"c", L.c}, {"violations", L.violations}, {"attempts", attempts}});
  }
  c.result = {{"status", solver::to_string(rep.status)}, {"levels", levels}};
  if (!rep.note.empty()) c.result["note"] = rep.note;
  if (rep.potential.size() > 0) {
    c.result["viscosity_violations"] = static_cast<int>(solver::viscosity_subharmonic_check(rep.potential, F, M).size());
    const Verdict ev = manifold::evans_potential(M, a.r_K);
    const double lo = 2.0 * a.r_K;
    const double hi = a.r_K * std::ldexp(1.0, a.levels);
    if (ev.status == Status::Holds && hi <= rep.potential.grid.r1) {
      const RadialFunction& e = *ev.witness;
      const RadialFunction neg([e](double r) { return -e(r); }, [e](double r) { return -e.d1(r); },
                               [e](double r) { return -e.d2(r); });
      double best = 0.0;
      const double dev = solver::envelope_deviation(rep.potential, neg, lo, hi, &best);
      c.result["evans_envelope"] = {{"a", lo}, {"b", hi}, {"deviation", dev}, {"c", best}};
    }
    c.csv = to_csv(rep.potential);
  }
  c.statuses.push_back(rep.status == solver::StackStatus::Converged ? "Holds" : "Fails");
  if (rep.status == solver::StackStatus::Diverged) c.exit_code = kNumerical;
}

void simulate(const SimulateArgs& a, Context& c) {
  const ModelManifold M = parse_manifold(a.manifold);
  manifold::BrownianOptions o;
  o.r_start = a.r_start;
  o.T = a.T;
  o.n_paths = a.paths;
  o.seed = a.seed;
  o.dt = a.dt;
  o.eps_floor = a.eps_floor;
  o.peclet = a.peclet;
  o.r_explode = a.r_explode;
  o.threads = a.threads;
  c.inputs = {{"manifold", M.spec()}, {"r_start", a.r_start}, {"T", a.T}, {"paths", a.paths},
              {"r_explode", a.r_explode}, {"ode", !a.no_ode}, {"delta", a.delta}};
  c.seeds["seed"] = a.seed;
  c.tolerances = {{"dt", a.dt}, {"eps_floor", a.eps_floor}, {"peclet", a.peclet}};

  const auto mc = manifold::brownian_explosion_mc(M, o);
  c.result["mc"] = {{"explosion_fraction", mc.explosion_fraction},
                    {"ci_low", mc.ci_low},
                    {"ci_high", mc.ci_high},
                    {"exploded", mc.exploded},
                    {"exits_without_certificate", mc.exits_without_certificate},
                    {"overflow_paths", mc.overflow_paths},
                    {"n_paths", mc.n_paths},
                    {"r_explode", mc.r_explode},
                    {"escape_time", mc.escape_time},
                    {"explosive", mc.explosive()}};
  c.statuses.push_back(mc.explosive() ? "Fails" : "Holds");
  if (!a.no_ode) {
    const auto ode = manifold::ahlfors_witness_ode(M, std::nullopt, a.r_start, a.delta);
    c.result["ode"] = to_json(ode);
    // a bounded witness (Fails) certifies explosion
    c.result["concordant"] = (ode.status == Status::Fails) == mc.explosive();
    c.statuses.push_back(manifold::to_string(ode.status));
  }
}

void jets_command(const JetsArgs& a, Context& c) {
  c.inputs = {{"action", a.action}, {"m", a.m}};
  const auto F = [&] {
    if (a.subeq.empty()) throw ParameterError("jets " + a.action + " needs --subeq");
    return build(parse_subeq(a.subeq), a.m);
  };
  if (a.action == "riesz") {
    const auto S = F();
    c.inputs["subequation"] = subeq_record(S);
    c.tolerances = {{"tol", a.tol}, {"cap", a.cap}};
    c.result["p_F"] = jets::riesz_characteristic(S, a.tol, a.cap);
    return;
  }
  if (a.action == "pucci") {
    const auto A = parse_matrix(a.matrix);
    c.inputs["matrix"] = a.matrix;
    c.inputs["lo"] = a.lo;
    c.inputs["hi"] = a.hi;
    c.result = {{"eigenvalues", vector_json(jets::eigenvalues(A))},
                {"plus", jets::pucci(A, a.lo, a.hi, jets::PucciSign::Plus)},
                {"minus", jets::pucci(A, a.lo, a.hi, jets::PucciSign::Minus)}};
    return;
  }
  if (a.action == "garding") {
    c.inputs["k"] = a.k;
    if (!a.matrix.empty()) {
      const auto A = parse_matrix(a.matrix);
      c.inputs["matrix"] = a.matrix;
      const Eigen::VectorXd lambda = jets::eigenvalues(A);
      Json sig = Json::array();
      for (int i = 1; i <= a.k; ++i) sig.push_back(jets::sigma_k(lambda, i));
      c.result = {{"eigenvalues", vector_json(lambda)},
                  {"mu", vector_json(jets::garding_eigenvalues(A, a.k))},
                  {"sigma", sig}};
      return;
    }
    c.inputs["samples"] = a.samples;
    c.seeds["seed"] = a.seed;
    const auto rep = jets::branch_equivalence_check(a.k, a.m, a.samples, a.seed);
    c.result["branch_equivalence"] = report_json(rep);
    c.statuses.push_back(holds(rep.ok()));
    return;
  }
  c.inputs["samples"] = a.samples;
  c.seeds["seed"] = a.seed;
  c.tolerances["boundary_eps"] = jets::kBoundaryEps;
  if (a.action == "dual" || a.action == "duality-suite") {
    const auto S = F();
    c.inputs["subequation"] = subeq_record(S);
    const auto D = jets::dual(S);
    c.result["dual"] = subeq_record(D);
    const auto closed = jets::closed_form_dual(S);
    if (closed) {
      const auto rep = jets::compare_membership(D, *closed, a.samples, a.seed);
      c.result["closed_form"] = subeq_record(*closed);
      c.result["closed_form_agreement"] = report_json(rep);
      c.statuses.push_back(holds(rep.ok()));
    } else {
      c.result["closed_form"] = nullptr;
    }
    if (a.action == "duality-suite") {
      const auto G = a.with.empty() ? S : build(parse_subeq(a.with), a.m);
      c.inputs["with"] = subeq_record(G);
      const auto rep = jets::duality_suite(S, G, a.samples, a.seed);
      c.result["involution"] = report_json(rep.involution);
      c.result["de_morgan"] = report_json(rep.de_morgan);
      c.result["ok"] = rep.ok();
      c.statuses.push_back(holds(rep.ok()));
    }
    return;
  }
  if (a.action == "monotonicity") {
    const auto S = F();
    if (a.cone.empty()) throw ParameterError("jets monotonicity needs --cone");
    const auto Mc = build(parse_subeq(a.cone), a.m);
    c.inputs["subequation"] = subeq_record(S);
    c.inputs["cone"] = subeq_record(Mc);
    const auto rep = jets::monotonicity_check(S, Mc, a.samples, a.seed);
    c.result = {{"holds_on_samples", rep.holds_on_samples},
                {"inconclusive", rep.inconclusive},
                {"samples", rep.samples}};
    if (rep.counterexample)
      c.result["counterexample"] = {{"jet", jet_json(rep.counterexample->first)},
                                    {"cone_jet", jet_json(rep.counterexample->second)}};
    if (!rep.inconclusive) c.statuses.push_back(holds(rep.holds_on_samples));
    return;
  }
  throw ParameterError("unknown jets action '" + a.action + "'");
}

}  // namespace mpak::cli
