#include "hypflow/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "hypflow/parallel.hpp"
#include "hypflow/reduction.hpp"
#include "hypflow/snapshot_io.hpp"

namespace hypflow {

std::string to_string(RhsVariant v) { return v == RhsVariant::Full ? "full" : "gauge_fixed"; }

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Homothetic: return "homothetic";
    case Experiment::Stability: return "stability";
    case Experiment::Convergence: return "convergence";
    default: return "generic";
  }
}

void RunConfig::validate() const {
  Grid check(dim, points, box);  // grid invariants
  (void)check;
  if (!(d > 0.0)) throw std::invalid_argument("config: d must be positive");
  if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("config: cfl must be in (0,1]");
  if (!(t_end > 0.0)) throw std::invalid_argument("config: t_end must be positive");
  if (difference_order != 2 && difference_order != 4)
    throw std::invalid_argument("config: difference_order must be 2 or 4");
  if (cadence < 1) throw std::invalid_argument("config: cadence must be >= 1");
  if (snapshot_cadence < 0) throw std::invalid_argument("config: snapshot_cadence must be >= 0");
  if (dt_fixed < 0.0) throw std::invalid_argument("config: dt_fixed must be nonnegative");
  if (experiment == Experiment::Stability && !(t_end < box / 2.0))
    throw std::invalid_argument(
        "stability runs need t_end < box/2 so signals cannot wrap around");
}

double cfl_dt(const MetricField& g, double cfl_factor) {
  const Grid& gr = g.grid();
  double min_eig = min_metric_eigenvalue(g);
  if (!(min_eig > 0.0)) throw DegenerateMetric(0, min_eig);
  double max_speed = 1.0 / std::sqrt(min_eig);  // sqrt of largest eig of g^{-1}
  return cfl_factor * gr.spacing() / (std::sqrt(static_cast<double>(gr.dim)) * max_speed);
}

namespace {

SymTensorField rhs_field(const FlowState& s, RhsVariant variant, const FlowParams& params,
                         int order) {
  return variant == RhsVariant::Full ? dissipative_rhs(s, params, order)
                                     : gauge_fixed_rhs(s, params, order);
}

SymTensorField lin_comb(const SymTensorField& a, double ca, const SymTensorField& b, double cb) {
  SymTensorField out = a;
  for (int c = 0; c < out.ncomp(); ++c) {
    double* o = out.comp(c);
    const double* bb = b.comp(c);
    par::parallel_for(out.npts(), [&](std::size_t p) { o[p] = ca * o[p] + cb * bb[p]; });
  }
  return out;
}

void check_finite(const FlowState& s) {
  auto finite = [](const SymTensorField& f) {
    double bad = par::chunked_sum(f.npts() * static_cast<std::size_t>(f.ncomp()),
                                  [&](std::size_t i) {
                                    return std::isfinite(f.raw()[i]) ? 0.0 : 1.0;
                                  });
    return bad == 0.0;
  };
  if (!finite(s.g) || !finite(s.k)) throw NonFinite(s.t);
}

void check_spd(const MetricField& g) {
  const int n = g.grid().dim;
  const int m = sym_count(n);
  const std::size_t np = g.npts();
  long long bad = static_cast<long long>(np);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : bad)
#endif
  for (long long p = 0; p < static_cast<long long>(np); ++p) {
    double s[6];
    for (int c = 0; c < m; ++c) s[c] = g.comp(c)[p];
    if (!sym_positive_beyond(n, s, spd_threshold(n, s)))
      if (p < bad) bad = p;
  }
  if (bad < static_cast<long long>(np)) {
    double s[6];
    for (int c = 0; c < m; ++c) s[c] = g.comp(c)[static_cast<std::size_t>(bad)];
    throw DegenerateMetric(static_cast<std::size_t>(bad), sym_min_eig(n, s));
  }
}

}  // namespace

FlowState step(const FlowState& s, double dt, RhsVariant variant, const FlowParams& params,
               int order) {
  const SymTensorField& g = s.g;
  const SymTensorField& k = s.k;

  SymTensorField a1 = rhs_field(s, variant, params, order);
  FlowState s2(s.t + 0.5 * dt, lin_comb(g, 1.0, k, 0.5 * dt), lin_comb(k, 1.0, a1, 0.5 * dt));
  SymTensorField a2 = rhs_field(s2, variant, params, order);
  FlowState s3(s.t + 0.5 * dt, lin_comb(g, 1.0, s2.k, 0.5 * dt),
               lin_comb(k, 1.0, a2, 0.5 * dt));
  SymTensorField a3 = rhs_field(s3, variant, params, order);
  FlowState s4(s.t + dt, lin_comb(g, 1.0, s3.k, dt), lin_comb(k, 1.0, a3, dt));
  SymTensorField a4 = rhs_field(s4, variant, params, order);

  SymTensorField gn = g;
  SymTensorField kn = k;
  const double c = dt / 6.0;
  for (int cc = 0; cc < gn.ncomp(); ++cc) {
    double* go = gn.comp(cc);
    double* ko = kn.comp(cc);
    const double* k0 = k.comp(cc);
    const double* k2 = s2.k.comp(cc);
    const double* k3 = s3.k.comp(cc);
    const double* k4 = s4.k.comp(cc);
    const double* r1 = a1.comp(cc);
    const double* r2 = a2.comp(cc);
    const double* r3 = a3.comp(cc);
    const double* r4 = a4.comp(cc);
    par::parallel_for(gn.npts(), [&](std::size_t p) {
      go[p] += c * (k0[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
      ko[p] += c * (r1[p] + 2.0 * r2[p] + 2.0 * r3[p] + r4[p]);
    });
  }
  FlowState out(s.t + dt, std::move(gn), std::move(kn));
  check_finite(out);
  check_spd(out.g);
  return out;
}

double wave_energy(const FlowState& s, int order) {
  const Grid& gr = s.g.grid();
  const int n = gr.dim;
  double cell = std::pow(gr.spacing(), gr.dim);
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      int c = sym_at(n, i, j);
      const double* gc = s.g.comp(c);
      const double* kc = s.k.comp(c);
      const double delta = (i == j) ? 1.0 : 0.0;
      total += cell * par::chunked_sum(gr.npts(), [&](std::size_t p) {
                 double hij = gc[p] - delta;
                 return kc[p] * kc[p] + hij * hij;
               });
      for (int a = 0; a < n; ++a) {
        std::vector<double> dh(gr.npts());
        diff1(gr, gc, dh.data(), a, order);
        total += cell *
                 par::chunked_sum(gr.npts(), [&](std::size_t p) { return dh[p] * dh[p]; });
      }
    }
  return total;
}

namespace {

EnergyRecord make_record(const FlowState& s, double dt, int order) {
  const Grid& gr = s.g.grid();
  const int n = gr.dim;
  EnergyRecord r;
  r.t = s.t;
  r.dt = dt;
  TraceDiagnostics td = trace_quantities(s);
  r.u_min = par::chunked_min(gr.npts(), [&](std::size_t p) { return td.u[p]; });
  r.u_max = par::chunked_max(gr.npts(), [&](std::size_t p) { return td.u[p]; });
  r.v_max = par::chunked_max(gr.npts(), [&](std::size_t p) { return td.v[p]; });
  r.w_max = par::chunked_max(gr.npts(), [&](std::size_t p) { return td.w[p]; });
  MetricDerived md = metric_derived(s.g, order);
  ScalarField scal(gr);
  SymTensorField ric = ricci_tensor(s.g, md, order, nullptr, &scal);
  r.R_min = par::chunked_min(gr.npts(), [&](std::size_t p) { return scal[p]; });
  r.R_max = par::chunked_max(gr.npts(), [&](std::size_t p) { return scal[p]; });
  r.min_eig_g = min_metric_eigenvalue(s.g);
  ConstraintNorms cn = harmonic_constraint_monitor(contracted_christoffel(md.inv, md.gamma));
  r.gamma_sup = cn.sup;
  r.gamma_l2 = cn.l2;
  r.energy = wave_energy(s, order);
  r.sup_h = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double* gc = s.g.comp(sym_at(n, i, j));
      const double delta = (i == j) ? 1.0 : 0.0;
      double m = par::chunked_max(gr.npts(),
                                  [&](std::size_t p) { return std::abs(gc[p] - delta); });
      if (m > r.sup_h) r.sup_h = m;
    }
  return r;
}

}  // namespace

EvolveResult evolve(const RunConfig& config) {
  config.validate();
  if (config.threads > 0) {
    par::set_threads(config.threads);
  } else if (const char* env = std::getenv("HYPFLOW_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) par::set_threads(t);
  }
  auto t_start = std::chrono::steady_clock::now();

  Grid grid(config.dim, config.points, config.box);
  FlowParams params(config.dim, config.d);
  FlowState state = build_initial_data(grid, config.initial);
  check_spd(state.g);

  double dt = config.dt_fixed > 0.0 ? config.dt_fixed : cfl_dt(state.g, config.cfl);
  std::size_t nsteps = static_cast<std::size_t>(std::ceil(config.t_end / dt - 1e-12));
  if (nsteps == 0) nsteps = 1;
  dt = config.t_end / static_cast<double>(nsteps);

  EvolveResult res;
  res.dt = dt;
  SnapshotWriter snaps(config.out_dir, config.snapshot_cadence);

  auto emit = [&](const FlowState& s) {
    res.records.push_back(make_record(s, dt, config.difference_order));
  };

  emit(state);
  snaps.maybe_write(state, 0);
  if (config.keep_trajectory) res.trajectory.push_back(state);

  for (std::size_t s = 0; s < nsteps; ++s) {
    try {
      state = step(state, dt, config.rhs_variant, params, config.difference_order);
    } catch (const DegenerateMetric& e) {
      res.exit_code = 2;
      res.event = "degenerate";
      res.event_time = state.t + dt;
      EnergyRecord ev;
      ev.t = res.event_time;
      ev.dt = dt;
      ev.min_eig_g = e.min_eigenvalue;
      ev.event = res.event;
      res.records.push_back(ev);
      break;
    } catch (const NonFinite&) {
      res.exit_code = 3;
      res.event = "nonfinite";
      res.event_time = state.t + dt;
      EnergyRecord ev;
      ev.t = res.event_time;
      ev.dt = dt;
      ev.event = res.event;
      res.records.push_back(ev);
      break;
    }
    res.steps = s + 1;
    bool last = (s + 1 == nsteps);
    if ((s + 1) % static_cast<std::size_t>(config.cadence) == 0 || last) emit(state);
    snaps.maybe_write(state, s + 1);
    if (config.keep_trajectory) res.trajectory.push_back(state);
  }

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (!config.out_dir.empty())
    write_diagnostics_csv(config.out_dir + "/diagnostics.csv", res.records);
  return res;
}

StabilityReport stability_experiment(const PerturbationSpec& spec, const RunConfig& base,
                                     double d_paired) {
  RunConfig cfg = base;
  cfg.experiment = Experiment::Stability;
  cfg.initial.kind = InitialDataSpec::Kind::Bump;
  cfg.initial.bump = spec;

  StabilityReport rep;
  rep.epsilon = spec.epsilon;
  rep.run = evolve(cfg);
  rep.completed = rep.run.exit_code == 0;
  rep.e0 = rep.run.records.front().energy;
  rep.e_end = rep.run.records.back().energy;
  rep.decay_ratio = rep.e_end / rep.e0;
  for (const EnergyRecord& r : rep.run.records)
    if (r.event.empty() && r.sup_h > rep.sup_h_max) rep.sup_h_max = r.sup_h;
  rep.overshoot = rep.sup_h_max / spec.epsilon;

  RunConfig paired = cfg;
  paired.d = d_paired;
  if (!paired.out_dir.empty()) paired.out_dir += "-paired";
  EvolveResult pr = evolve(paired);
  rep.d_paired = d_paired;
  rep.e_end_paired = pr.records.back().energy;
  rep.dissipation_monotone = rep.completed && pr.exit_code == 0 && rep.e_end < rep.e_end_paired;
  return rep;
}

std::vector<ResidualNorms> identity_residual_norms(const std::vector<FlowState>& trajectory,
                                                   const FlowParams& params, int order) {
  std::vector<ResidualNorms> out;
  if (trajectory.size() < 3) return out;
  auto norms = [](const ScalarField& f, double& sup, double& l2) {
    const Grid& gr = f.grid();
    sup = par::chunked_max(gr.npts(), [&](std::size_t p) { return std::abs(f[p]); });
    double cell = std::pow(gr.spacing(), gr.dim);
    l2 = std::sqrt(cell *
                   par::chunked_sum(gr.npts(), [&](std::size_t p) { return f[p] * f[p]; }));
  };
  for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
    double dt1 = trajectory[i].t - trajectory[i - 1].t;
    double dt2 = trajectory[i + 1].t - trajectory[i].t;
    if (std::abs(dt1 - dt2) > 1e-12 * std::max(dt1, dt2)) continue;
    ResidualNorms rn;
    rn.t = trajectory[i].t;
    ScalarField ru =
        u_evolution_residual(trajectory[i - 1], trajectory[i], trajectory[i + 1], params, order);
    ScalarField rv =
        v_evolution_residual(trajectory[i - 1], trajectory[i], trajectory[i + 1], params, order);
    ScalarField rw =
        scalar_wave_residual(trajectory[i - 1], trajectory[i], trajectory[i + 1], params, order);
    norms(ru, rn.u_sup, rn.u_l2);
    norms(rv, rn.v_sup, rn.v_l2);
    norms(rw, rn.wave_sup, rn.wave_l2);
    out.push_back(rn);
  }
  return out;
}

ConvergenceReport convergence_study(const RunConfig& config,
                                    const std::array<int, 3>& refinements) {
  ConvergenceReport rep;
  for (std::size_t i = 0; i + 1 < refinements.size(); ++i)
    if (refinements[i + 1] == refinements[i])
      rep.warnings.push_back("identical refinement factors: error ratio 1, order undefined");

  std::vector<EvolveResult> runs;
  std::vector<Grid> grids;
  FlowParams params(config.dim, config.d);
  for (int r : refinements) {
    RunConfig cfg = config;
    cfg.points = config.points * r;
    cfg.keep_trajectory = true;
    cfg.out_dir.clear();
    if (config.dt_fixed > 0.0) cfg.dt_fixed = config.dt_fixed / r;
    EvolveResult res = evolve(cfg);
    if (res.exit_code != 0)
      rep.warnings.push_back("run at refinement " + std::to_string(r) +
                             " ended early: " + res.event);
    rep.resolutions.push_back(cfg.points);
    rep.dts.push_back(res.dt);
    grids.emplace_back(cfg.dim, cfg.points, cfg.box);
    runs.push_back(std::move(res));

    const std::vector<FlowState>& traj = runs.back().trajectory;
    if (traj.size() >= 3) {
      std::size_t c = traj.size() / 2;
      if (c + 1 >= traj.size()) c = traj.size() - 2;
      if (c < 1) c = 1;
      ScalarField ru = u_evolution_residual(traj[c - 1], traj[c], traj[c + 1], params,
                                            config.difference_order);
      ScalarField rv = v_evolution_residual(traj[c - 1], traj[c], traj[c + 1], params,
                                            config.difference_order);
      ScalarField rw = scalar_wave_residual(traj[c - 1], traj[c], traj[c + 1], params,
                                            config.difference_order);
      auto sup = [](const ScalarField& f) {
        return par::chunked_max(f.npts(), [&](std::size_t p) { return std::abs(f[p]); });
      };
      rep.u_residual_sups.push_back(sup(ru));
      rep.v_residual_sups.push_back(sup(rv));
      rep.wave_residual_sups.push_back(sup(rw));
    }
  }

  // field self-convergence: compare final states on shared points
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    if (runs[i].trajectory.empty() || runs[i + 1].trajectory.empty()) continue;
    const FlowState& coarse = runs[i].trajectory.back();
    const FlowState& fine = runs[i + 1].trajectory.back();
    int rf = refinements[i + 1] / refinements[i];
    if (rf * refinements[i] != refinements[i + 1]) {
      rep.warnings.push_back("non-nested refinements; field comparison skipped");
      continue;
    }
    const Grid& gc = grids[i];
    const Grid& gf = grids[i + 1];
    const int N = gc.n_axis;
    double err = 0.0;
    for (int c = 0; c < coarse.g.ncomp(); ++c) {
      const double* cc = coarse.g.comp(c);
      const double* ff = fine.g.comp(c);
      err = std::max(err, par::chunked_max(gc.npts(), [&](std::size_t p) {
              int ix, iy, iz = 0;
              if (gc.dim == 2) {
                ix = static_cast<int>(p) / N;
                iy = static_cast<int>(p) % N;
              } else {
                ix = static_cast<int>(p / (static_cast<std::size_t>(N) * N));
                iy = static_cast<int>((p / N) % N);
                iz = static_cast<int>(p % N);
              }
              std::size_t pf =
                  gc.dim == 2
                      ? static_cast<std::size_t>(ix) * rf * gf.n_axis + iy * rf
                      : (static_cast<std::size_t>(ix) * rf * gf.n_axis + iy * rf) * gf.n_axis +
                            iz * rf;
              return std::abs(cc[p] - ff[pf]);
            }));
    }
    rep.field_errors.push_back(err);
  }
  for (std::size_t i = 0; i + 1 < rep.field_errors.size(); ++i) {
    double hratio = static_cast<double>(refinements[i + 1]) / refinements[i];
    if (rep.field_errors[i + 1] > 0.0 && rep.field_errors[i] > 0.0)
      rep.field_orders.push_back(std::log(rep.field_errors[i] / rep.field_errors[i + 1]) /
                                 std::log(hratio));
  }
  auto push_orders = [&](const std::vector<double>& sups, std::vector<double>& orders) {
    for (std::size_t i = 0; i + 1 < sups.size(); ++i) {
      double hratio = static_cast<double>(refinements[i + 1]) / refinements[i];
      if (sups[i] > 0.0 && sups[i + 1] > 0.0)
        orders.push_back(std::log(sups[i] / sups[i + 1]) / std::log(hratio));
    }
  };
  push_orders(rep.u_residual_sups, rep.u_residual_orders);
  push_orders(rep.v_residual_sups, rep.v_residual_orders);
  push_orders(rep.wave_residual_sups, rep.wave_residual_orders);
  return rep;
}

}  // namespace hypflow
