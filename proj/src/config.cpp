#include "hypflow/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hypflow/exact_scale.hpp"
#include "hypflow/parallel.hpp"
#include "hypflow/reduction.hpp"
#include "hypflow/snapshot_io.hpp"
#include "hypflow/soliton.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hypflow {

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& scope) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw UsageError("unknown config key '" + it.key() + "' in " + scope);
  }
}

template <class T>
void get_to(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      j.at(key).get_to(out);
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

void check(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

InitialDataSpec parse_initial(const json& j) {
  reject_unknown(j, {"kind", "mu", "amplitude", "modes", "bump"}, "initial");
  InitialDataSpec spec;
  std::string kind = "flat";
  get_to(j, "kind", kind);
  if (kind == "flat")
    spec.kind = InitialDataSpec::Kind::Flat;
  else if (kind == "homothetic")
    spec.kind = InitialDataSpec::Kind::Homothetic;
  else if (kind == "conformal_trig")
    spec.kind = InitialDataSpec::Kind::ConformalTrig;
  else if (kind == "bump")
    spec.kind = InitialDataSpec::Kind::Bump;
  else
    throw UsageError("initial.kind must be flat|homothetic|conformal_trig|bump, got '" + kind +
                     "'");
  get_to(j, "mu", spec.mu);
  get_to(j, "amplitude", spec.amplitude);
  get_to(j, "modes", spec.modes);
  if (j.contains("bump")) {
    const json& b = j.at("bump");
    reject_unknown(b, {"epsilon", "g0", "g1"}, "initial.bump");
    get_to(b, "epsilon", spec.bump.epsilon);
    auto parse_bump = [](const json& bj, TensorBumpSpec& t) {
      reject_unknown(bj, {"amplitude", "center", "radius"}, "bump tensor");
      get_to(bj, "amplitude", t.amplitude);
      get_to(bj, "center", t.center);
      get_to(bj, "radius", t.radius);
    };
    if (b.contains("g0")) parse_bump(b.at("g0"), spec.bump.g0);
    if (b.contains("g1")) parse_bump(b.at("g1"), spec.bump.g1);
  }
  return spec;
}

json initial_to_json(const InitialDataSpec& s) {
  json j;
  switch (s.kind) {
    case InitialDataSpec::Kind::Flat: j["kind"] = "flat"; break;
    case InitialDataSpec::Kind::Homothetic: j["kind"] = "homothetic"; break;
    case InitialDataSpec::Kind::ConformalTrig: j["kind"] = "conformal_trig"; break;
    case InitialDataSpec::Kind::Bump: j["kind"] = "bump"; break;
  }
  j["mu"] = s.mu;
  j["amplitude"] = s.amplitude;
  j["modes"] = s.modes;
  json b;
  b["epsilon"] = s.bump.epsilon;
  b["g0"] = {{"amplitude", s.bump.g0.amplitude},
             {"center", s.bump.g0.center},
             {"radius", s.bump.g0.radius}};
  b["g1"] = {{"amplitude", s.bump.g1.amplitude},
             {"center", s.bump.g1.center},
             {"radius", s.bump.g1.radius}};
  j["bump"] = b;
  return j;
}

constexpr const char* kRunKeys[] = {"dim",     "points",   "box",
                                    "d",       "cfl",      "t_end",
                                    "difference_order",    "rhs_variant",
                                    "experiment",          "initial",
                                    "cadence", "snapshot_cadence",
                                    "keep_trajectory",     "out_dir",
                                    "seed",    "threads",  "dt_fixed"};

RunConfig parse_run(const json& j, std::initializer_list<const char*> extra,
                    const std::string& scope) {
  std::vector<const char*> allowed(std::begin(kRunKeys), std::end(kRunKeys));
  allowed.insert(allowed.end(), extra.begin(), extra.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw UsageError("unknown config key '" + it.key() + "' in " + scope);
  }
  RunConfig c;
  get_to(j, "dim", c.dim);
  get_to(j, "points", c.points);
  get_to(j, "box", c.box);
  get_to(j, "d", c.d);
  get_to(j, "cfl", c.cfl);
  get_to(j, "t_end", c.t_end);
  get_to(j, "difference_order", c.difference_order);
  if (j.contains("rhs_variant")) {
    std::string v = j.at("rhs_variant").get<std::string>();
    check(v == "full" || v == "gauge_fixed", "rhs_variant must be full|gauge_fixed");
    c.rhs_variant = v == "full" ? RhsVariant::Full : RhsVariant::GaugeFixed;
  }
  if (j.contains("experiment")) {
    std::string v = j.at("experiment").get<std::string>();
    if (v == "generic")
      c.experiment = Experiment::Generic;
    else if (v == "homothetic")
      c.experiment = Experiment::Homothetic;
    else if (v == "stability")
      c.experiment = Experiment::Stability;
    else if (v == "convergence")
      c.experiment = Experiment::Convergence;
    else
      throw UsageError("experiment must be generic|homothetic|stability|convergence");
  }
  if (j.contains("initial")) c.initial = parse_initial(j.at("initial"));
  get_to(j, "cadence", c.cadence);
  get_to(j, "snapshot_cadence", c.snapshot_cadence);
  get_to(j, "keep_trajectory", c.keep_trajectory);
  get_to(j, "out_dir", c.out_dir);
  get_to(j, "seed", c.seed);
  get_to(j, "threads", c.threads);
  get_to(j, "dt_fixed", c.dt_fixed);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void write_json_report(const std::string& dir, const std::string& name, const json& j) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream out(dir + "/" + name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + dir + "/" + name);
  out << j.dump(2) << "\n";
}

}  // namespace

PerturbationSpec default_perturbation(int dim, double box, double epsilon) {
  PerturbationSpec ps;
  ps.epsilon = epsilon;
  double c = box / 2.0;
  ps.g0.center = {c, c, c};
  ps.g1.center = {c, c, c};
  ps.g0.radius = 1.0;
  ps.g1.radius = 1.0;
  if (dim == 3) {
    ps.g0.amplitude = {1.0, 0.3, 0.2, 0.5, 0.1, 0.8};
    ps.g1.amplitude = {0.4, -0.2, 0.1, 0.6, -0.3, 0.2};
  } else {
    ps.g0.amplitude = {1.0, 0.3, 0.5, 0, 0, 0};
    ps.g1.amplitude = {0.4, -0.2, 0.6, 0, 0, 0};
  }
  return ps;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config parse error: ") + e.what());
  }
}

ExactOpts parse_exact(const json& j) {
  reject_unknown(j, {"lambda", "mu", "d", "dim", "variant", "dt", "t_end", "out_dir"}, "exact");
  ExactOpts o;
  get_to(j, "lambda", o.lambda);
  get_to(j, "mu", o.mu);
  get_to(j, "d", o.d);
  get_to(j, "dim", o.dim);
  get_to(j, "variant", o.variant);
  get_to(j, "dt", o.dt);
  get_to(j, "t_end", o.t_end);
  get_to(j, "out_dir", o.out_dir);
  check(o.d > 0.0, "d must be positive");
  check(o.dim >= 2, "dim must be >= 2");
  check(o.variant == "paper" || o.variant == "substitution",
        "variant must be paper|substitution");
  check(o.dt > 0.0 && o.t_end > 0.0, "dt and t_end must be positive");
  return o;
}

RunConfig parse_evolve(const json& j) { return parse_run(j, {}, "evolve"); }

SolitonOpts parse_soliton(const json& j) {
  reject_unknown(j,
                 {"dim", "points", "box", "d", "difference_order", "metric", "candidate",
                  "out_dir", "threads"},
                 "soliton");
  SolitonOpts o;
  get_to(j, "dim", o.dim);
  get_to(j, "points", o.points);
  get_to(j, "box", o.box);
  get_to(j, "d", o.d);
  get_to(j, "difference_order", o.difference_order);
  get_to(j, "out_dir", o.out_dir);
  get_to(j, "threads", o.threads);
  if (j.contains("metric")) {
    const json& m = j.at("metric");
    reject_unknown(m, {"kind", "amplitude", "modes", "seed"}, "soliton.metric");
    get_to(m, "kind", o.metric.kind);
    get_to(m, "amplitude", o.metric.amplitude);
    get_to(m, "modes", o.metric.modes);
    get_to(m, "seed", o.metric.seed);
    check(o.metric.kind == "flat" || o.metric.kind == "conformal_trig" ||
              o.metric.kind == "random_spd",
          "metric.kind must be flat|conformal_trig|random_spd");
  }
  if (j.contains("candidate")) {
    const json& c = j.at("candidate");
    reject_unknown(c, {"kind", "amplitude", "mode", "value", "components", "seed"},
                   "soliton.candidate");
    get_to(c, "kind", o.candidate.kind);
    get_to(c, "amplitude", o.candidate.amplitude);
    get_to(c, "mode", o.candidate.mode);
    get_to(c, "value", o.candidate.value);
    get_to(c, "components", o.candidate.components);
    get_to(c, "seed", o.candidate.seed);
    for (const char* k : {"gradient_trig", "gradient_constant", "gradient_random", "vector_trig",
                          "vector_constant", "vector_zero"})
      if (o.candidate.kind == k) return o;
    throw UsageError("unknown candidate.kind '" + o.candidate.kind + "'");
  }
  return o;
}

IdentitiesOpts parse_identities(const json& j) {
  reject_unknown(j, {"run_dir", "d", "difference_order", "write_residual_fields", "out_dir",
                     "threads"},
                 "identities");
  IdentitiesOpts o;
  get_to(j, "run_dir", o.run_dir);
  get_to(j, "d", o.d);
  get_to(j, "difference_order", o.difference_order);
  get_to(j, "write_residual_fields", o.write_residual_fields);
  get_to(j, "out_dir", o.out_dir);
  get_to(j, "threads", o.threads);
  check(!o.run_dir.empty(), "identities needs run_dir");
  check(o.d > 0.0, "d must be positive");
  return o;
}

StabilityOpts parse_stability(const json& j) {
  StabilityOpts o;
  o.run = parse_run(j, {"epsilon", "d_paired"}, "stability");
  get_to(j, "epsilon", o.epsilon);
  get_to(j, "d_paired", o.d_paired);
  check(o.epsilon > 0.0, "epsilon must be positive");
  check(o.d_paired > 0.0, "d_paired must be positive");
  o.run.experiment = Experiment::Stability;
  try {
    o.run.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return o;
}

ConvergenceOpts parse_convergence(const json& j) {
  ConvergenceOpts o;
  o.run = parse_run(j, {"refinements"}, "convergence");
  get_to(j, "refinements", o.refinements);
  for (int r : o.refinements) check(r >= 1, "refinements must be >= 1");
  o.run.experiment = Experiment::Convergence;
  return o;
}

json to_json(const ExactOpts& o) {
  return json{{"lambda", o.lambda}, {"mu", o.mu},       {"d", o.d},
              {"dim", o.dim},       {"variant", o.variant}, {"dt", o.dt},
              {"t_end", o.t_end},   {"out_dir", o.out_dir}};
}

json to_json(const RunConfig& c) {
  json j;
  j["dim"] = c.dim;
  j["points"] = c.points;
  j["box"] = c.box;
  j["d"] = c.d;
  j["cfl"] = c.cfl;
  j["t_end"] = c.t_end;
  j["difference_order"] = c.difference_order;
  j["rhs_variant"] = to_string(c.rhs_variant);
  j["experiment"] = to_string(c.experiment);
  j["initial"] = initial_to_json(c.initial);
  j["cadence"] = c.cadence;
  j["snapshot_cadence"] = c.snapshot_cadence;
  j["keep_trajectory"] = c.keep_trajectory;
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["dt_fixed"] = c.dt_fixed;
  return j;
}

json to_json(const SolitonOpts& o) {
  json j;
  j["dim"] = o.dim;
  j["points"] = o.points;
  j["box"] = o.box;
  j["d"] = o.d;
  j["difference_order"] = o.difference_order;
  j["metric"] = {{"kind", o.metric.kind},
                 {"amplitude", o.metric.amplitude},
                 {"modes", o.metric.modes},
                 {"seed", o.metric.seed}};
  j["candidate"] = {{"kind", o.candidate.kind},   {"amplitude", o.candidate.amplitude},
                    {"mode", o.candidate.mode},   {"value", o.candidate.value},
                    {"components", o.candidate.components}, {"seed", o.candidate.seed}};
  j["out_dir"] = o.out_dir;
  j["threads"] = o.threads;
  return j;
}

json to_json(const IdentitiesOpts& o) {
  return json{{"run_dir", o.run_dir},
              {"d", o.d},
              {"difference_order", o.difference_order},
              {"write_residual_fields", o.write_residual_fields},
              {"out_dir", o.out_dir},
              {"threads", o.threads}};
}

json to_json(const StabilityOpts& o) {
  json j = to_json(o.run);
  j["epsilon"] = o.epsilon;
  j["d_paired"] = o.d_paired;
  return j;
}

json to_json(const ConvergenceOpts& o) {
  json j = to_json(o.run);
  j["refinements"] = o.refinements;
  return j;
}

int run_exact(const ExactOpts& o) {
  ScaleProblem p(o.lambda, o.mu, o.d, o.dim);
  ScaleVariant variant =
      o.variant == "paper" ? ScaleVariant::PaperClosedForm : ScaleVariant::SubstitutionOde;
  ScaleSolution sol = integrate_scale(p, variant, o.dt, o.t_end);
  ScaleFate fate = classify_fate(p, variant);

  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    std::ofstream csv(o.out_dir + "/scale.csv", std::ios::binary);
    csv << "t,rho,rho_prime\n";
    for (const ScaleSample& s : sol.samples)
      csv << format_double(s.t) << ',' << format_double(s.rho) << ','
          << format_double(s.rho_prime) << '\n';
    json rep;
    rep["schema_version"] = 1;
    rep["variant"] = o.variant;
    rep["fate"] = fate.describe();
    rep["fate_kind"] = fate.kind == ScaleFate::ShrinksAtFiniteTime    ? "finite_time_shrink"
                       : fate.kind == ScaleFate::ShrinksAsTToInfinity ? "asymptotic_shrink"
                                                                      : "smooth_forever";
    if (fate.kind == ScaleFate::ShrinksAtFiniteTime) rep["shrink_time"] = fate.time;
    if (sol.shrink_time) rep["integration_event_time"] = *sol.shrink_time;
    write_json_report(o.out_dir, "report.json", rep);
  }
  std::cout << "exact[" << o.variant << "] lambda=" << o.lambda << " mu=" << o.mu
            << " d=" << o.d << ": " << fate.describe() << "\n";
  return 0;
}

int run_evolve(const RunConfig& c) {
  EvolveResult res = evolve(c);
  if (!c.out_dir.empty()) {
    json rep;
    rep["schema_version"] = 1;
    rep["steps"] = res.steps;
    rep["dt"] = res.dt;
    rep["exit_code"] = res.exit_code;
    rep["event"] = res.event;
    if (!res.event.empty()) rep["event_time"] = res.event_time;
    const EnergyRecord& last = res.records.back();
    rep["final"] = {{"t", last.t},         {"energy", last.energy}, {"sup_h", last.sup_h},
                    {"u_max", last.u_max}, {"R_max", last.R_max},   {"min_eig_g", last.min_eig_g}};
    write_json_report(c.out_dir, "report.json", rep);
  }
  std::cout << "evolve: steps=" << res.steps << " dt=" << res.dt
            << " exit=" << res.exit_code << (res.event.empty() ? "" : " event=" + res.event)
            << " wall=" << res.wall_seconds << "s\n";
  return res.exit_code;
}

int run_soliton(const SolitonOpts& o) {
  par::set_threads(o.threads);
  Grid grid(o.dim, o.points, o.box);
  MetricField g(grid);
  if (o.metric.kind == "flat") {
    InitialDataSpec flat;
    g = build_initial_data(grid, flat).g;
  } else if (o.metric.kind == "conformal_trig") {
    g = conformal_metric(conformal_phi(grid, o.metric.amplitude, o.metric.modes));
  } else {
    g = random_spd_metric_field(grid, o.metric.seed, o.metric.amplitude);
  }

  json rep;
  rep["schema_version"] = 1;
  rep["metric"] = o.metric.kind;
  rep["candidate"] = o.candidate.kind;

  auto sup_sym = [](const SymTensorField& f) {
    return par::chunked_max(f.npts(), [&](std::size_t p) {
      double v = 0.0;
      for (int c = 0; c < f.ncomp(); ++c) v = std::max(v, std::abs(f.comp(c)[p]));
      return v;
    });
  };

  if (o.candidate.kind.rfind("gradient", 0) == 0) {
    ScalarField f(grid);
    if (o.candidate.kind == "gradient_constant") {
      par::parallel_for(grid.npts(), [&](std::size_t p) { f[p] = o.candidate.value; });
    } else if (o.candidate.kind == "gradient_random") {
      f = random_smooth_scalar(grid, o.candidate.seed, o.candidate.amplitude);
    } else {
      std::array<int, 3> modes{o.candidate.mode, 0, 0};
      f = conformal_phi(grid, o.candidate.amplitude, modes);
    }
    SolitonCandidate cand(std::move(g), std::move(f), o.d);
    SymTensorField res = gradient_soliton_residual(cand, o.difference_order);
    ScalarField tres = trace_residual(cand, o.difference_order);
    CertificateReport cert = theorem31_certificate(cand, o.difference_order);
    rep["residual_sup"] = sup_sym(res);
    rep["trace_residual_sup"] =
        par::chunked_max(grid.npts(), [&](std::size_t p) { return std::abs(tres[p]); });
    rep["certificate"] = {{"r0", cert.r0},
                          {"volume", cert.volume},
                          {"divergence_integral", cert.divergence_integral},
                          {"dissipative_integral", cert.dissipative_integral},
                          {"quadratic_integral", cert.quadratic_integral},
                          {"hessian_norm_sq", cert.hessian_norm_sq},
                          {"residual_sup", cert.residual_sup},
                          {"tol_integral", cert.tol_integral},
                          {"tol_residual", cert.tol_residual},
                          {"is_soliton", cert.is_soliton},
                          {"implication_holds", cert.implication_holds},
                          {"pass", cert.pass}};
    std::cout << "soliton[gradient]: residual_sup=" << cert.residual_sup
              << " r0=" << cert.r0 << " certificate=" << (cert.pass ? "pass" : "fail") << "\n";
  } else {
    VectorField v(grid);
    if (o.candidate.kind == "vector_constant") {
      par::parallel_for(grid.npts(), [&](std::size_t p) {
        for (int a = 0; a < grid.dim; ++a) v.comp(a)[p] = o.candidate.components[a];
      });
    } else if (o.candidate.kind == "vector_trig") {
      const double two_pi = 6.283185307179586476925286766559;
      const double L = grid.box;
      const int N = grid.n_axis;
      par::parallel_for(grid.npts(), [&](std::size_t p) {
        std::size_t ix = grid.dim == 2 ? p / N : p / (static_cast<std::size_t>(N) * N);
        double x = grid.spacing() * static_cast<double>(ix);
        v.comp(0)[p] = o.candidate.amplitude * std::sin(two_pi * o.candidate.mode * x / L);
      });
    }
    SolitonCandidate cand(std::move(g), std::move(v), o.d);
    SymTensorField res = soliton_residual(cand, o.difference_order);
    rep["residual_sup"] = sup_sym(res);
    std::cout << "soliton[vector]: residual_sup=" << rep["residual_sup"].get<double>() << "\n";
  }
  write_json_report(o.out_dir, "report.json", rep);
  return 0;
}

int run_identities(const IdentitiesOpts& o) {
  par::set_threads(o.threads);
  std::vector<std::string> dirs = list_snapshots(o.run_dir);
  if (dirs.size() < 3) throw UsageError("run_dir has fewer than 3 snapshots: " + o.run_dir);
  std::vector<FlowState> traj;
  traj.reserve(dirs.size());
  for (const std::string& d : dirs) traj.push_back(read_state_snapshot(d));
  FlowParams params(traj.front().g.grid().dim, o.d);
  std::vector<ResidualNorms> norms = identity_residual_norms(traj, params, o.difference_order);

  json rows = json::array();
  for (const ResidualNorms& r : norms)
    rows.push_back({{"t", r.t},
                    {"u_evolution", {{"sup", r.u_sup}, {"l2", r.u_l2}}},
                    {"v_evolution", {{"sup", r.v_sup}, {"l2", r.v_l2}}},
                    {"scalar_wave", {{"sup", r.wave_sup}, {"l2", r.wave_l2}}}});
  json rep;
  rep["schema_version"] = 1;
  rep["snapshots"] = dirs.size();
  rep["residuals"] = rows;

  std::string out = o.out_dir.empty() ? o.run_dir : o.out_dir;
  write_json_report(out, "identities.json", rep);
  {
    std::ofstream csv(out + "/residuals.csv", std::ios::binary);
    csv << "t,u_res_sup,u_res_l2,v_res_sup,v_res_l2,wave_res_sup,wave_res_l2\n";
    for (const ResidualNorms& r : norms)
      csv << format_double(r.t) << ',' << format_double(r.u_sup) << ','
          << format_double(r.u_l2) << ',' << format_double(r.v_sup) << ','
          << format_double(r.v_l2) << ',' << format_double(r.wave_sup) << ','
          << format_double(r.wave_l2) << '\n';
  }
  if (o.write_residual_fields) {
    FlowParams params2(traj.front().g.grid().dim, o.d);
    int idx = 0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      ScalarField ru = u_evolution_residual(traj[i - 1], traj[i], traj[i + 1], params2,
                                            o.difference_order);
      char name[32];
      std::snprintf(name, sizeof(name), "%06d", idx++);
      write_field_snapshot(out + "/residual_fields/" + name, ru, {"u_residual"}, traj[i].t);
    }
  }
  std::cout << "identities: " << norms.size() << " residual rows -> " << out << "\n";
  return 0;
}

int run_stability(const StabilityOpts& o) {
  PerturbationSpec spec = default_perturbation(o.run.dim, o.run.box, o.epsilon);
  if (o.run.initial.kind == InitialDataSpec::Kind::Bump &&
      o.run.initial.bump.epsilon > 0.0)
    spec = o.run.initial.bump;  // explicit bump spec wins
  StabilityReport rep = stability_experiment(spec, o.run, o.d_paired);
  if (!o.run.out_dir.empty()) {
    json j;
    j["schema_version"] = 1;
    j["epsilon"] = rep.epsilon;
    j["completed"] = rep.completed;
    j["energy_initial"] = rep.e0;
    j["energy_final"] = rep.e_end;
    j["decay_ratio"] = rep.decay_ratio;
    j["sup_h_max"] = rep.sup_h_max;
    j["overshoot"] = rep.overshoot;
    j["d"] = o.run.d;
    j["d_paired"] = rep.d_paired;
    j["energy_final_paired"] = rep.e_end_paired;
    j["dissipation_monotone"] = rep.dissipation_monotone;
    write_json_report(o.run.out_dir, "stability.json", j);
  }
  std::cout << "stability: eps=" << rep.epsilon << " E0=" << rep.e0 << " E(t_end)=" << rep.e_end
            << " decay=" << rep.decay_ratio << " overshoot=" << rep.overshoot
            << " monotone_in_d=" << (rep.dissipation_monotone ? "yes" : "no") << "\n";
  return rep.run.exit_code;
}

int run_convergence(const ConvergenceOpts& o) {
  ConvergenceReport rep = convergence_study(o.run, o.refinements);
  json j;
  j["schema_version"] = 1;
  j["resolutions"] = rep.resolutions;
  j["dts"] = rep.dts;
  j["field_errors"] = rep.field_errors;
  j["field_orders"] = rep.field_orders;
  j["u_residual_sups"] = rep.u_residual_sups;
  j["v_residual_sups"] = rep.v_residual_sups;
  j["wave_residual_sups"] = rep.wave_residual_sups;
  j["u_residual_orders"] = rep.u_residual_orders;
  j["v_residual_orders"] = rep.v_residual_orders;
  j["wave_residual_orders"] = rep.wave_residual_orders;
  j["warnings"] = rep.warnings;
  write_json_report(o.run.out_dir, "convergence.json", j);
  for (const std::string& w : rep.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "convergence: resolutions=" << rep.resolutions.size()
            << " field_orders=" << json(rep.field_orders).dump()
            << " u_orders=" << json(rep.u_residual_orders).dump() << "\n";
  return 0;
}

}  // namespace hypflow
