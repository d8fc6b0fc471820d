#include <cmath>
#include <random>

#include "doctest.h"
#include "hypflow/initial_data.hpp"
#include "hypflow/reduction.hpp"
#include "support.hpp"

using namespace hypflow;

TEST_CASE("first-order unknown vector dimensions and packing") {
  CHECK(system_dimension(2) == 12);
  CHECK(system_dimension(3) == 30);

  Grid g(3, 8, 1.0);
  SUBCASE("flat stationary state") {
    FlowState s(0.0, hftest::flat_metric(g), SymTensorField(g));
    FirstOrderField u = assemble_state(s);
    CHECK(u.ncomp() == 30);
    for (int i = 0; i < 3; ++i) CHECK(u.g_comp(sym_index(3, i, i))[0] == 1.0);
    CHECK(u.g_comp(sym_index(3, 0, 1))[0] == 0.0);
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 6; ++c)
        for (std::size_t p = 0; p < g.npts(); ++p) CHECK(u.spatial_comp(k, c)[p] == 0.0);
    for (int c = 0; c < 6; ++c) CHECK(u.h_comp(c)[0] == 0.0);
  }
  SUBCASE("homothetic state packs scale and rate") {
    FlowState s(0.0, hftest::scaled_identity(g, 2.0), hftest::scaled_identity(g, 0.1));
    FirstOrderField u = assemble_state(s);
    for (int i = 0; i < 3; ++i) {
      CHECK(u.g_comp(sym_index(3, i, i))[3] == 2.0);
      CHECK(u.h_comp(sym_index(3, i, i))[3] == doctest::Approx(0.1).epsilon(1e-15));
    }
    for (int k = 0; k < 3; ++k) CHECK(u.spatial_comp(k, 0)[5] == 0.0);
  }
}

TEST_CASE("gauge-fixed source") {
  Grid g(3, 8, 1.0);
  FlowParams params(3, 1.0);
  SUBCASE("flat stationary gives zero") {
    FlowState s(0.0, hftest::flat_metric(g), SymTensorField(g));
    CHECK(hftest::sup_abs(source_Htilde(s, params)) == 0.0);
  }
  SUBCASE("flat metric with homothetic velocity matches the coefficient family") {
    FlowState s(0.0, hftest::flat_metric(g), hftest::scaled_identity(g, 1.0));
    SymTensorField src = source_Htilde(s, params);
    SymTensorField expect = hftest::scaled_identity(g, -2.0);
    CHECK(hftest::sup_diff(src, expect) < 1e-14);
  }
  SUBCASE("static conformal metric: algebraic consistency with the expansion identity") {
    // With k = 0,  wave(g) + Htilde + (g d(Gamma) terms + dg Gamma term)
    // must reproduce 2 * ricci_via_expansion exactly (same discrete operators).
    Grid g2(3, 12, 1.0);
    ScalarField phi = random_smooth_scalar(g2, 31, 0.05);
    MetricField gm = conformal_metric(phi);
    FlowState s(0.0, gm, SymTensorField(g2));
    SymTensorField gauge = gauge_fixed_rhs(s, params);  // wave + Htilde
    SymTensorField expansion = ricci_via_expansion(gm);

    MetricDerived md = metric_derived(gm);
    VectorField contr = contracted_christoffel(md.inv, md.gamma);
    std::vector<VectorField> dcontr;
    for (int a = 0; a < 3; ++a) dcontr.push_back(partial(contr, a));

    double worst = 0.0, scale = 1.0;
    for (std::size_t p = 0; p < g2.npts(); ++p)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double gauge_terms = 0.0;
          for (int k = 0; k < 3; ++k) {
            gauge_terms += gm.comp_ij(i, k)[p] * dcontr[j].comp(k)[p] +
                           gm.comp_ij(j, k)[p] * dcontr[i].comp(k)[p];
            gauge_terms += md.dg[k].comp_ij(i, j)[p] * contr.comp(k)[p];
          }
          double lhs = gauge.comp_ij(i, j)[p] + 2.0 * expansion.comp_ij(i, j)[p] - gauge_terms;
          worst = std::max(worst, std::abs(lhs));
          scale = std::max(scale, std::abs(gauge.comp_ij(i, j)[p]));
        }
    CHECK(worst <= 1e-12 * scale);
  }
}

TEST_CASE("gauge-fixed rhs equals the full rhs where the gauge holds exactly") {
  Grid g(3, 8, 1.0);
  FlowParams params(3, 1.0);
  FlowState s(0.0, hftest::scaled_identity(g, 2.0), hftest::scaled_identity(g, 0.1));
  SymTensorField a = gauge_fixed_rhs(s, params);
  SymTensorField b = dissipative_rhs(s, params);
  CHECK(hftest::sup_diff(a, b) <= 1e-12);
}

TEST_CASE("system matrices") {
  SUBCASE("flat 2-D: A0 is the identity, A1 couples spatial-1 and h blocks") {
    double gp[3] = {1.0, 0.0, 1.0};
    SystemMatrices m = assemble_matrices(2, gp);
    CHECK(m.A0.rows() == 12);
    CHECK((m.A0 - Eigen::MatrixXd::Identity(12, 12)).norm() == 0.0);
    // A1 nonzero blocks: (spatial-1, h) and (h, spatial-1), both identities
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(12, 12);
    expected.block(3, 9, 3, 3) = Eigen::MatrixXd::Identity(3, 3);
    expected.block(9, 3, 3, 3) = Eigen::MatrixXd::Identity(3, 3);
    CHECK((m.Aj[0] - expected).norm() == 0.0);
    int nonzeros = 0;
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 12; ++c)
        if (m.Aj[0](r, c) != 0.0) ++nonzeros;
    CHECK(nonzeros == 6);
  }
  SUBCASE("diag(4,1): the inverse-metric block pattern") {
    double gp[3] = {4.0, 0.0, 1.0};
    SystemMatrices m = assemble_matrices(2, gp);
    CHECK(m.A0(3, 3) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.A0(6, 6) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.A0(3, 6) == 0.0);
    HyperbolicityReport rep = verify_symmetric_hyperbolic(m);
    CHECK(rep.pass);
    CHECK(rep.min_eig_a0 == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("identity metric passes with min eigenvalue 1") {
    double gp[6] = {1, 0, 0, 1, 0, 1};
    HyperbolicityReport rep = verify_symmetric_hyperbolic(assemble_matrices(3, gp));
    CHECK(rep.pass);
    CHECK(rep.min_eig_a0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("seeded random SPD metrics are symmetric hyperbolic") {
    std::mt19937_64 rng(2024);
    for (int n : {2, 3})
      for (int trial = 0; trial < 20; ++trial) {
        double gp[6];
        random_spd_point(n, rng, gp);
        SystemMatrices m = assemble_matrices(n, gp);
        HyperbolicityReport rep = verify_symmetric_hyperbolic(m);
        CHECK(rep.a0_symmetric);
        CHECK(rep.aj_symmetric);
        CHECK(rep.min_eig_a0 > 0.0);
        CHECK(m.A0.rows() == system_dimension(n));
      }
  }
  SUBCASE("indefinite input fails with the negative eigenvalue reported") {
    double gp[3] = {1.0, 0.0, -1.0};
    HyperbolicityReport rep = verify_symmetric_hyperbolic(assemble_matrices(2, gp));
    CHECK(!rep.pass);
    CHECK(rep.min_eig_a0 < 0.0);
    CHECK(rep.detail.find("A0") != std::string::npos);
  }
  SUBCASE("source vector carries (h; 0; Htilde)") {
    double gp[3] = {1.0, 0.0, 1.0};
    double hp[3] = {0.5, -0.25, 0.125};
    double ht[3] = {1.5, 2.5, -3.5};
    SystemMatrices m = assemble_matrices(2, gp, hp, ht);
    for (int s = 0; s < 3; ++s) {
      CHECK(m.B(s) == hp[s]);
      CHECK(m.B(3 + s) == 0.0);
      CHECK(m.B(6 + s) == 0.0);
      CHECK(m.B(9 + s) == ht[s]);
    }
  }
}

TEST_CASE("first-order system reduces back to the gauge-fixed equation") {
  Grid g(2, 16, 1.0);
  FlowParams params(2, 0.8);
  ScalarField phi = random_smooth_scalar(g, 77, 0.05);
  MetricField gm = conformal_metric(phi);
  SymTensorField k = random_smooth_sym(g, 78, 0.1);
  FlowState s(0.0, gm, k);

  FirstOrderField u = assemble_state(s);
  FirstOrderField du = first_order_rhs(s, u, params);
  SymTensorField second_order = gauge_fixed_rhs(s, params);

  double worst = 0.0, scale = 1.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t p = 0; p < g.npts(); ++p) {
      worst = std::max(worst, std::abs(du.h_comp(c)[p] - second_order.comp(c)[p]));
      scale = std::max(scale, std::abs(second_order.comp(c)[p]));
      // dg/dt block reproduces the velocity exactly
      CHECK(du.g_comp(c)[p] == u.h_comp(c)[p]);
    }
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("harmonic constraint monitor") {
  Grid g(3, 12, 1.0);
  SUBCASE("flat and homothetic metrics satisfy the gauge exactly") {
    ConstraintNorms flat = harmonic_constraint_monitor(hftest::flat_metric(g));
    CHECK(flat.sup == 0.0);
    CHECK(flat.l2 == 0.0);
    ConstraintNorms hom = harmonic_constraint_monitor(hftest::scaled_identity(g, 1.7));
    CHECK(hom.sup == 0.0);
  }
  SUBCASE("conformal metric matches the closed-form contracted Christoffel") {
    const double amp = 0.05;
    ScalarField phi = hftest::scalar_from(
        g, [&](const double* x) { return amp * std::sin(hftest::kTwoPi * x[0]); });
    MetricField gm = conformal_metric(phi);
    ConstraintNorms cn = harmonic_constraint_monitor(gm);
    // sup over x of |(2-n) e^{-2 phi} phi'(x)|
    double expect = 0.0;
    const int N = g.n_axis;
    for (int i = 0; i < N; ++i) {
      double x = g.spacing() * i;
      double val = std::abs(-std::exp(-2.0 * amp * std::sin(hftest::kTwoPi * x)) * amp *
                            hftest::kTwoPi * std::cos(hftest::kTwoPi * x));
      expect = std::max(expect, val);
    }
    CHECK(cn.sup == doctest::Approx(expect).epsilon(0.05));
    CHECK(cn.l2 > 0.0);
  }
}
