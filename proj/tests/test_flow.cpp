#include <cmath>

#include "doctest.h"
#include "hypflow/dynamics.hpp"
#include "hypflow/exact_scale.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/initial_data.hpp"
#include "support.hpp"

using namespace hypflow;
using hftest::kTwoPi;

namespace {

// states of the homothetic flow sampled from the substitution-ODE trajectory
FlowState homothetic_state(const Grid& g, double t, double rho, double rho_prime) {
  return FlowState(t, hftest::scaled_identity(g, rho), hftest::scaled_identity(g, rho_prime));
}

std::array<FlowState, 3> homothetic_triple(const Grid& g, const ScaleProblem& p, double dt) {
  ScaleSolution sol = integrate_scale(p, ScaleVariant::SubstitutionOde, dt / 64.0, 2.0 * dt);
  auto at = [&](double t) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < sol.samples.size(); ++i)
      if (std::abs(sol.samples[i].t - t) < std::abs(sol.samples[best].t - t)) best = i;
    return sol.samples[best];
  };
  ScaleSample s0 = at(0.0), s1 = at(dt), s2 = at(2.0 * dt);
  return {homothetic_state(g, s0.t, s0.rho, s0.rho_prime),
          homothetic_state(g, s1.t, s1.rho, s1.rho_prime),
          homothetic_state(g, s2.t, s2.rho, s2.rho_prime)};
}

}  // namespace

TEST_CASE("general velocity coupling") {
  Grid g(3, 8, 1.0);
  MetricField gm = random_spd_metric_field(g, 5, 0.1);
  SymTensorField k = random_smooth_sym(g, 6, 0.2);

  SUBCASE("all-zero coefficients give the zero field") {
    CHECK(hftest::sup_abs(general_G(gm, k, CoefficientSet::zero())) == 0.0);
  }
  SUBCASE("zero velocity gives the zero field") {
    SymTensorField k0(g);
    CHECK(hftest::sup_abs(general_G(gm, k0, CoefficientSet::dissipative(3, 1.0))) == 0.0);
  }
  SUBCASE("homothetic closed form: G = ((2-n) m^2 - d m) I") {
    MetricField id = hftest::flat_metric(g);
    SymTensorField k1 = hftest::scaled_identity(g, 1.0);
    SymTensorField G = general_G(id, k1, CoefficientSet::dissipative(3, 1.0));
    SymTensorField expect = hftest::scaled_identity(g, -2.0);
    CHECK(hftest::sup_diff(G, expect) < 1e-14);
  }
}

TEST_CASE("dissipative right-hand side") {
  Grid g(3, 8, 1.0);
  FlowParams params(3, 1.0);

  SUBCASE("flat stationary data is exactly stationary") {
    FlowState s(0.0, hftest::flat_metric(g), SymTensorField(g));
    CHECK(hftest::sup_abs(dissipative_rhs(s, params)) == 0.0);
  }
  SUBCASE("homothetic data: rhs = (-d rho' + (2-n) rho'^2 / rho) I") {
    FlowState s(0.0, hftest::flat_metric(g), hftest::scaled_identity(g, 0.1));
    SymTensorField rhs = dissipative_rhs(s, params);
    SymTensorField expect = hftest::scaled_identity(g, -0.11);
    CHECK(hftest::sup_diff(rhs, expect) < 1e-14);
  }
  SUBCASE("equals -2 Ricci + G bit for bit") {
    Grid g2(2, 16, 1.0);
    ScalarField phi = random_smooth_scalar(g2, 17, 0.08);
    MetricField gm = conformal_metric(phi);
    SymTensorField k = random_smooth_sym(g2, 18, 0.1);
    FlowState s(0.0, gm, k);
    FlowParams p2(2, 0.7);
    SymTensorField rhs = dissipative_rhs(s, p2);
    CurvatureBundle b = curvature(gm);
    SymTensorField alt = general_G(gm, k, CoefficientSet::dissipative(2, 0.7));
    for (int c = 0; c < alt.ncomp(); ++c)
      for (std::size_t pt = 0; pt < alt.npts(); ++pt)
        alt.comp(c)[pt] -= 2.0 * b.ricci.comp(c)[pt];
    CHECK(hftest::bit_equal(rhs, alt));
  }
}

TEST_CASE("trace diagnostics") {
  Grid g(3, 8, 1.0);
  SUBCASE("zero velocity") {
    FlowState s(0.0, hftest::flat_metric(g), SymTensorField(g));
    TraceDiagnostics td = trace_quantities(s);
    CHECK(hftest::sup_abs(td.u) == 0.0);
    CHECK(hftest::sup_abs(td.v) == 0.0);
    CHECK(hftest::sup_abs(td.w) == 0.0);
  }
  SUBCASE("homothetic: u = 3m, v = 3m^2, w = 3m^3") {
    const double m = 0.2;
    FlowState s(0.0, hftest::flat_metric(g), hftest::scaled_identity(g, m));
    TraceDiagnostics td = trace_quantities(s);
    CHECK(td.u[0] == doctest::Approx(3.0 * m).epsilon(1e-14));
    CHECK(td.v[0] == doctest::Approx(3.0 * m * m).epsilon(1e-14));
    CHECK(td.w[0] == doctest::Approx(3.0 * m * m * m).epsilon(1e-14));
  }
  SUBCASE("hand-computed 2x2 case") {
    Grid g2(2, 8, 1.0);
    SymTensorField gm = hftest::scaled_identity(g2, 2.0);
    SymTensorField k(g2);
    for (std::size_t p = 0; p < g2.npts(); ++p) k.comp_ij(0, 0)[p] = 2.0;
    TraceDiagnostics td = trace_quantities(FlowState(0.0, gm, k));
    CHECK(td.u[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(td.v[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(td.w[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("trace identities and nonnegativity on random data") {
    for (int dim : {2, 3}) {
      Grid gr(dim, 12, 1.0);
      MetricField gm = random_spd_metric_field(gr, 100 + dim, 0.15);
      SymTensorField k = random_smooth_sym(gr, 200 + dim, 0.5);
      TraceDiagnostics td = trace_quantities(FlowState(0.0, gm, k));
      double worst_u = 0, worst_v = 0, worst_w = 0, scale = 1.0;
      bool v_nonneg = true;
      for (std::size_t p = 0; p < gr.npts(); ++p) {
        double G[3][3];
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) G[i][j] = td.G_matrix.comp_ab(i, j)[p];
        double u = 0, v = 0, w = 0;
        for (int i = 0; i < dim; ++i) u += G[i][i];
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) v += G[i][j] * G[j][i];
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            for (int q = 0; q < dim; ++q) w += G[i][j] * G[j][q] * G[q][i];
        worst_u = std::max(worst_u, std::abs(td.u[p] - u));
        worst_v = std::max(worst_v, std::abs(td.v[p] - v));
        worst_w = std::max(worst_w, std::abs(td.w[p] - w));
        scale = std::max({scale, std::abs(u), std::abs(v), std::abs(w)});
        v_nonneg = v_nonneg && td.v[p] >= 0.0;
      }
      CHECK(worst_u <= 1e-12 * scale);
      CHECK(worst_v <= 1e-12 * scale);
      CHECK(worst_w <= 1e-12 * scale);
      CHECK(v_nonneg);
    }
  }
}

TEST_CASE("u and v evolution residuals on homothetic trajectories") {
  Grid g(3, 8, 1.0);
  FlowParams params(3, 1.0);
  ScaleProblem prob(0.0, 0.1, 1.0, 3);

  SUBCASE("the identity right-hand sides at t = 0 evaluate to -0.36 and -0.072") {
    FlowState s(0.0, hftest::flat_metric(g), hftest::scaled_identity(g, 0.1));
    TraceDiagnostics td = trace_quantities(s);
    double u = td.u[0], v = td.v[0], w = td.w[0];
    double rhs_u = -0.5 * u * u - u - v / 2.0;                        // n = 3, d = 1, R = 0
    double rhs_v = 2.0 * w - 5.0 * u * v - 2.0 * v + u * u * u;
    CHECK(rhs_u == doctest::Approx(-0.36).epsilon(1e-12));
    CHECK(rhs_v == doctest::Approx(-0.072).epsilon(1e-12));
  }

  SUBCASE("stationary Ricci-flat trajectory gives the zero residual") {
    FlowState s(0.0, hftest::flat_metric(g), SymTensorField(g));
    FlowState s1(1e-2, hftest::flat_metric(g), SymTensorField(g));
    FlowState s2(2e-2, hftest::flat_metric(g), SymTensorField(g));
    CHECK(hftest::sup_abs(u_evolution_residual(s, s1, s2, params)) == 0.0);
    CHECK(hftest::sup_abs(v_evolution_residual(s, s1, s2, params)) == 0.0);
  }

  SUBCASE("residual shrinks at second order in the sampling step") {
    auto coarse = homothetic_triple(g, prob, 2e-2);
    auto fine = homothetic_triple(g, prob, 1e-2);
    double cu =
        hftest::sup_abs(u_evolution_residual(coarse[0], coarse[1], coarse[2], params));
    double fu = hftest::sup_abs(u_evolution_residual(fine[0], fine[1], fine[2], params));
    double cv =
        hftest::sup_abs(v_evolution_residual(coarse[0], coarse[1], coarse[2], params));
    double fv = hftest::sup_abs(v_evolution_residual(fine[0], fine[1], fine[2], params));
    INFO("u: ", cu, " -> ", fu, "   v: ", cv, " -> ", fv);
    CHECK(cu / fu > 3.2);
    CHECK(cu / fu < 4.8);
    CHECK(cv / fv > 3.2);
    CHECK(cv / fv < 4.8);
  }
}

TEST_CASE("scalar wave residual vanishes on homothetic trajectories") {
  Grid g(3, 8, 1.0);
  FlowParams params(3, 1.0);
  auto triple = homothetic_triple(g, ScaleProblem(0.0, 0.1, 1.0, 3), 1e-2);
  ScalarField res = scalar_wave_residual(triple[0], triple[1], triple[2], params);
  CHECK(hftest::sup_abs(res) <= 1e-12);
}

TEST_CASE("identity residuals converge on a conformal evolution") {
  // genuine integration, refined jointly in (dt, h)
  auto run = [](int N) {
    RunConfig cfg;
    cfg.dim = 2;
    cfg.points = N;
    cfg.box = 1.0;
    cfg.d = 1.0;
    cfg.t_end = 0.05;
    cfg.dt_fixed = 0.4 / N;
    cfg.keep_trajectory = true;
    cfg.initial.kind = InitialDataSpec::Kind::ConformalTrig;
    cfg.initial.amplitude = 0.05;
    cfg.initial.modes = {1, 1, 0};
    cfg.initial.mu = 0.1;
    return evolve(cfg);
  };
  FlowParams params(2, 1.0);
  EvolveResult coarse = run(16);
  EvolveResult fine = run(32);
  auto res_at_center = [&](const EvolveResult& r) {
    std::size_t c = r.trajectory.size() / 2;
    return std::array<double, 3>{
        hftest::sup_abs(u_evolution_residual(r.trajectory[c - 1], r.trajectory[c],
                                             r.trajectory[c + 1], params)),
        hftest::sup_abs(v_evolution_residual(r.trajectory[c - 1], r.trajectory[c],
                                             r.trajectory[c + 1], params)),
        hftest::sup_abs(scalar_wave_residual(r.trajectory[c - 1], r.trajectory[c],
                                             r.trajectory[c + 1], params))};
  };
  auto rc = res_at_center(coarse);
  auto rf = res_at_center(fine);
  for (int i = 0; i < 3; ++i) {
    INFO("residual ", i, ": ", rc[i], " -> ", rf[i]);
    CHECK(rc[i] / rf[i] > 2.8);
    CHECK(rc[i] / rf[i] < 5.6);
  }
}
