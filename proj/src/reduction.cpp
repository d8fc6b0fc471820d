#include "hypflow/reduction.hpp"

#include <cmath>

#include "hypflow/parallel.hpp"

namespace hypflow {

namespace {

inline void load_sym(const SymTensorField& f, std::size_t p, int m, double* out) {
  for (int c = 0; c < m; ++c) out[c] = f.comp(c)[p];
}

}  // namespace

FirstOrderField assemble_state(const FlowState& state, int order) {
  const Grid& gr = state.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  invert_metric(state.g);  // SPD check on entry
  FirstOrderField u(gr);
  for (int s = 0; s < m; ++s) {
    const double* gc = state.g.comp(s);
    const double* kc = state.k.comp(s);
    double* ug = u.g_comp(s);
    double* uh = u.h_comp(s);
    par::parallel_for(gr.npts(), [&](std::size_t p) {
      ug[p] = gc[p];
      uh[p] = kc[p];
    });
    for (int k = 0; k < n; ++k) diff1(gr, gc, u.spatial_comp(k, s), k, order);
  }
  return u;
}

SymTensorField source_Htilde(const FlowState& state, const FlowParams& params, int order) {
  const Grid& gr = state.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md = metric_derived(state.g, order);
  // velocity terms coincide with the dissipative coefficient family
  SymTensorField out =
      general_G(state.g, state.k, md.inv, CoefficientSet::dissipative(n, params.d));

  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6], gi[6], gm[3][6], d[3][6];
    load_sym(state.g, p, m, gx);
    load_sym(md.inv, p, m, gi);
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < m; ++s) gm[k][s] = md.gamma.comp(k * m + s)[p];
    for (int a = 0; a < n; ++a) load_sym(md.dg[a], p, m, d[a]);

    double W[3][3];  // W^k_j = Gamma^k_rs (g^-1 d_j g g^-1)^{rs}
    for (int j = 0; j < n; ++j) {
      double Mj[3][3];
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              v += gi[sym_at(n, a, r)] * gi[sym_at(n, b, s)] * d[j][sym_at(n, a, b)];
          Mj[r][s] = v;
        }
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) v += gm[k][sym_at(n, r, s)] * Mj[r][s];
        W[k][j] = v;
      }
    }

    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double quad = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int pp = 0; pp < n; ++pp)
              for (int q = 0; q < n; ++q)
                quad += gi[sym_at(n, k, l)] * gx[sym_at(n, pp, q)] *
                        gm[pp][sym_at(n, i, k)] * gm[q][sym_at(n, j, l)];
        double v = -2.0 * quad;
        for (int k = 0; k < n; ++k)
          v -= gx[sym_at(n, i, k)] * W[k][j] + gx[sym_at(n, j, k)] * W[k][i];
        out.comp(sym_at(n, i, j))[p] += v;
      }
  });
  return out;
}

SymTensorField gauge_fixed_rhs(const FlowState& state, const FlowParams& params, int order) {
  SymTensorField inv = invert_metric(state.g);
  SymTensorField out = metric_wave_operator(state.g, inv, order);
  SymTensorField src = source_Htilde(state, params, order);
  for (int c = 0; c < out.ncomp(); ++c) {
    double* o = out.comp(c);
    const double* s = src.comp(c);
    par::parallel_for(out.npts(), [&](std::size_t p) { o[p] += s[p]; });
  }
  return out;
}

FirstOrderField first_order_rhs(const FlowState& state, const FirstOrderField& u,
                                const FlowParams& params, int order) {
  const Grid& gr = state.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  SymTensorField inv = invert_metric(state.g);
  SymTensorField htilde = source_Htilde(state, params, order);
  FirstOrderField du(gr);

  std::vector<double> tmp(gr.npts());
  for (int s = 0; s < m; ++s) {
    // dg/dt = h
    const double* uh = u.h_comp(s);
    double* outg = du.g_comp(s);
    par::parallel_for(gr.npts(), [&](std::size_t p) { outg[p] = uh[p]; });
    // d(g_,k)/dt = d_k h
    for (int k = 0; k < n; ++k) diff1(gr, uh, du.spatial_comp(k, s), k, order);
    // dh/dt = g^{kl} d_l (g_,k) + Htilde
    double* outh = du.h_comp(s);
    const double* ht = htilde.comp(s);
    par::parallel_for(gr.npts(), [&](std::size_t p) { outh[p] = ht[p]; });
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        diff1(gr, u.spatial_comp(k, s), tmp.data(), l, order);
        const double* ikl = inv.comp(sym_at(n, k, l));
        par::parallel_for(gr.npts(), [&](std::size_t p) { outh[p] += ikl[p] * tmp[p]; });
      }
  }
  return du;
}

SystemMatrices assemble_matrices(int n, const double* g_packed, const double* h_packed,
                                 const double* htilde_packed) {
  const int m = sym_count(n);
  const int dim = system_dimension(n);
  Eigen::MatrixXd gmat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gmat(i, j) = g_packed[sym_at(n, i, j)];
  double det = gmat.determinant();
  if (std::abs(det) < 1e-300) throw DegenerateMetric(0, 0.0);
  Eigen::MatrixXd raw = gmat.inverse();
  // the inverse of a symmetric matrix is symmetric; enforce it exactly so the
  // assembled blocks satisfy the symmetry checks to the bit
  Eigen::MatrixXd ginv = 0.5 * (raw + raw.transpose());

  SystemMatrices sm;
  sm.dim = dim;
  sm.A0 = Eigen::MatrixXd::Zero(dim, dim);
  sm.B = Eigen::VectorXd::Zero(dim);
  auto block = [m](int b) { return b * m; };

  for (int s = 0; s < m; ++s) sm.A0(block(0) + s, block(0) + s) = 1.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int s = 0; s < m; ++s) sm.A0(block(1 + k) + s, block(1 + l) + s) = ginv(k, l);
  for (int s = 0; s < m; ++s) sm.A0(block(1 + n) + s, block(1 + n) + s) = 1.0;

  sm.Aj.assign(n, Eigen::MatrixXd::Zero(dim, dim));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < m; ++s) {
        sm.Aj[j](block(1 + k) + s, block(1 + n) + s) = ginv(j, k);
        sm.Aj[j](block(1 + n) + s, block(1 + k) + s) = ginv(k, j);
      }

  if (h_packed)
    for (int s = 0; s < m; ++s) sm.B(block(0) + s) = h_packed[s];
  if (htilde_packed)
    for (int s = 0; s < m; ++s) sm.B(block(1 + n) + s) = htilde_packed[s];
  return sm;
}

HyperbolicityReport verify_symmetric_hyperbolic(const SystemMatrices& m) {
  HyperbolicityReport rep;
  rep.a0_symmetric = (m.A0 == m.A0.transpose());
  rep.aj_symmetric = true;
  for (std::size_t j = 0; j < m.Aj.size(); ++j) {
    if (m.Aj[j] != m.Aj[j].transpose()) {
      rep.aj_symmetric = false;
      rep.detail += "A" + std::to_string(j + 1) + " not symmetric; ";
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.A0, Eigen::EigenvaluesOnly);
  rep.min_eig_a0 = es.eigenvalues()(0);
  if (!(rep.min_eig_a0 > 0.0))
    rep.detail += "A0 min eigenvalue " + std::to_string(rep.min_eig_a0) +
                  " (metric block not positive definite); ";
  rep.pass = rep.a0_symmetric && rep.aj_symmetric && rep.min_eig_a0 > 0.0;
  return rep;
}

ConstraintNorms harmonic_constraint_monitor(const VectorField& contracted) {
  const Grid& gr = contracted.grid();
  const int n = gr.dim;
  ConstraintNorms out;
  out.sup = par::chunked_max(gr.npts(), [&](std::size_t p) {
    double m = 0.0;
    for (int k = 0; k < n; ++k) m = std::max(m, std::abs(contracted.comp(k)[p]));
    return m;
  });
  double cell = std::pow(gr.spacing(), gr.dim);
  double s2 = par::chunked_sum(gr.npts(), [&](std::size_t p) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += contracted.comp(k)[p] * contracted.comp(k)[p];
    return s;
  });
  out.l2 = std::sqrt(cell * s2);
  return out;
}

ConstraintNorms harmonic_constraint_monitor(const MetricField& g, int order) {
  return harmonic_constraint_monitor(contracted_christoffel(g, order));
}

}  // namespace hypflow
