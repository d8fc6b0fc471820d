#include "hypflow/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "hypflow/parallel.hpp"

namespace hypflow {

namespace {

inline void load_sym(const SymTensorField& f, std::size_t p, int m, double* out) {
  for (int c = 0; c < m; ++c) out[c] = f.comp(c)[p];
}

// u = g^{pq} k_pq and the exact contraction dg^{pq}/dt k_pq = -(g^-1 k g^-1)^{pq} k_pq.
inline void u_and_dginv_contraction(int n, const double* gi, const double* kv, double& u,
                                    double& dgk) {
  u = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) u += gi[sym_at(n, p, q)] * kv[sym_at(n, p, q)];
  double B[3][3];  // B = g^-1 k
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int q = 0; q < n; ++q) v += gi[sym_at(n, i, q)] * kv[sym_at(n, q, j)];
      B[i][j] = v;
    }
  dgk = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double biq = 0.0;  // (g^-1 k g^-1)^{pq}
      for (int r = 0; r < n; ++r) biq += B[p][r] * gi[sym_at(n, r, q)];
      dgk -= biq * kv[sym_at(n, p, q)];
    }
}

}  // namespace

SymTensorField general_G(const SymTensorField& g, const SymTensorField& k,
                         const SymTensorField& inv, const CoefficientSet& co) {
  const Grid& gr = g.grid();
  if (gr != k.grid()) throw std::invalid_argument("general_G: grids differ");
  const int n = gr.dim;
  const int m = sym_count(n);
  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6], gi[6], kv[6];
    load_sym(g, p, m, gx);
    load_sym(inv, p, m, gi);
    load_sym(k, p, m, kv);
    double u, dgk;
    u_and_dginv_contraction(n, gi, kv, u, dgk);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double kik = 0.0;  // g^{pq} k_ip k_jq
        for (int pp = 0; pp < n; ++pp)
          for (int q = 0; q < n; ++q)
            kik += gi[sym_at(n, pp, q)] * kv[sym_at(n, i, pp)] * kv[sym_at(n, j, q)];
        double v = co.a * kik + (co.b * u + co.d_raw) * kv[sym_at(n, i, j)] +
                   (co.e * u + co.f * u * u + co.h * dgk) * gx[sym_at(n, i, j)];
        out.comp(sym_at(n, i, j))[p] = v;
      }
  });
  return out;
}

SymTensorField general_G(const SymTensorField& g, const SymTensorField& k,
                         const CoefficientSet& co) {
  return general_G(g, k, invert_metric(g), co);
}

SymTensorField dissipative_rhs(const FlowState& state, const FlowParams& params, int order) {
  const Grid& gr = state.g.grid();
  const int n = gr.dim;
  MetricDerived md = metric_derived(state.g, order);
  SymTensorField ric = ricci_tensor(state.g, md, order);
  SymTensorField rhs = general_G(state.g, state.k, md.inv, CoefficientSet::dissipative(n, params.d));
  for (int c = 0; c < rhs.ncomp(); ++c) {
    double* r = rhs.comp(c);
    const double* rc = ric.comp(c);
    par::parallel_for(gr.npts(), [&](std::size_t p) { r[p] -= 2.0 * rc[p]; });
  }
  return rhs;
}

TraceDiagnostics trace_quantities(const FlowState& state) {
  const Grid& gr = state.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  SymTensorField inv = invert_metric(state.g);
  TraceDiagnostics td{ScalarField(gr), ScalarField(gr), ScalarField(gr), MatrixField(gr)};
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6], gi[6], kv[6];
    load_sym(state.g, p, m, gx);
    load_sym(inv, p, m, gi);
    load_sym(state.k, p, m, kv);
    double G[3][3];
    for (int i = 0; i < n; ++i)
      for (int kk = 0; kk < n; ++kk) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += kv[sym_at(n, i, j)] * gi[sym_at(n, j, kk)];
        G[i][kk] = v;
        td.G_matrix.comp_ab(i, kk)[p] = v;
      }
    double u = 0.0;
    for (int i = 0; i < n; ++i) u += G[i][i];
    // v as |L^-1 k L^-T|_F^2 with g = L L^T: nonnegative by construction
    double L[3][3];
    sym_cholesky(n, gx, L);
    double Y[3][3];  // Y = L^-1 k  (forward substitution per column)
    for (int col = 0; col < n; ++col) {
      for (int i = 0; i < n; ++i) {
        double s = kv[sym_at(n, i, col)];
        for (int q = 0; q < i; ++q) s -= L[i][q] * Y[q][col];
        Y[i][col] = s / L[i][i];
      }
    }
    double M[3][3];  // M = Y L^-T, i.e. M L^T = Y (solve rows)
    for (int row = 0; row < n; ++row) {
      for (int j = 0; j < n; ++j) {
        double s = Y[row][j];
        for (int q = 0; q < j; ++q) s -= M[row][q] * L[j][q];
        M[row][j] = s / L[j][j];
      }
    }
    double vfro = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) vfro += M[i][j] * M[i][j];
    double w = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int kk = 0; kk < n; ++kk) w += G[i][j] * G[j][kk] * G[kk][i];
    td.u[p] = u;
    td.v[p] = vfro;
    td.w[p] = w;
  });
  return td;
}

namespace {

void check_uniform_spacing(const FlowState& prev, const FlowState& mid, const FlowState& next) {
  double dt1 = mid.t - prev.t, dt2 = next.t - mid.t;
  if (!(dt1 > 0.0) || std::abs(dt1 - dt2) > 1e-12 * std::max(dt1, dt2))
    throw std::invalid_argument("residuals need three uniformly spaced snapshots");
}

}  // namespace

ScalarField u_evolution_residual(const FlowState& prev, const FlowState& mid,
                                 const FlowState& next, const FlowParams& params, int order) {
  check_uniform_spacing(prev, mid, next);
  const Grid& gr = mid.g.grid();
  const int n = gr.dim;
  const double dt = mid.t - prev.t;
  const double d = params.d;
  TraceDiagnostics tp = trace_quantities(prev);
  TraceDiagnostics tm = trace_quantities(mid);
  TraceDiagnostics tn = trace_quantities(next);
  ScalarField R = scalar_curvature(mid.g, order);
  ScalarField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double dudt = (tn.u[p] - tp.u[p]) / (2.0 * dt);
    double u = tm.u[p], v = tm.v[p];
    double rhs = -2.0 * R[p] - (double(n - 2) / (n - 1)) * u * u - d * u - v / (n - 1);
    out[p] = dudt - rhs;
  });
  return out;
}

ScalarField v_evolution_residual(const FlowState& prev, const FlowState& mid,
                                 const FlowState& next, const FlowParams& params, int order) {
  check_uniform_spacing(prev, mid, next);
  const Grid& gr = mid.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  const double dt = mid.t - prev.t;
  const double d = params.d;
  TraceDiagnostics tp = trace_quantities(prev);
  TraceDiagnostics tm = trace_quantities(mid);
  TraceDiagnostics tn = trace_quantities(next);
  MetricDerived md = metric_derived(mid.g, order);
  SymTensorField ric = ricci_tensor(mid.g, md, order);
  ScalarField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gi[6], kv[6], rc[6];
    load_sym(md.inv, p, m, gi);
    load_sym(mid.k, p, m, kv);
    load_sym(ric, p, m, rc);
    // g^{ik} g^{jl} k_ij R_kl  (velocity with lowered indices)
    double kR = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double kup = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            kup += gi[sym_at(n, i, a)] * gi[sym_at(n, j, b)] * kv[sym_at(n, a, b)];
        kR += kup * rc[sym_at(n, i, j)];
      }
    double dvdt = (tn.v[p] - tp.v[p]) / (2.0 * dt);
    double u = tm.u[p], v = tm.v[p], w = tm.w[p];
    double rhs = 2.0 * w - 4.0 * kR - (4.0 + 2.0 / (n - 1)) * u * v - 2.0 * d * v +
                 (2.0 / (n - 1)) * u * u * u;
    out[p] = dvdt - rhs;
  });
  return out;
}

ScalarField scalar_wave_residual(const FlowState& prev, const FlowState& mid,
                                 const FlowState& next, const FlowParams& params, int order) {
  check_uniform_spacing(prev, mid, next);
  const Grid& gr = mid.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  const double dt = mid.t - prev.t;
  const double d = params.d;

  ScalarField Rp = scalar_curvature(prev.g, order);
  ScalarField Rn = scalar_curvature(next.g, order);

  MetricDerived md = metric_derived(mid.g, order);
  ScalarField R0(gr), ricnorm(gr);
  SymTensorField ric(gr);
  {
    SymTensorField tmp = ricci_tensor(mid.g, md, order, nullptr, &R0, &ricnorm);
    ric = tmp;
  }
  VectorField contr = contracted_christoffel(md.inv, md.gamma);
  ScalarField lapR = laplace_beltrami(R0, md.inv, contr, order);
  Rank3SymField covk = covariant_derivative_sym2(mid.k, md.gamma, order);

  ScalarField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gi[6], kv[6];
    load_sym(md.inv, p, m, gi);
    load_sym(mid.k, p, m, kv);
    double u, dgk;
    u_and_dginv_contraction(n, gi, kv, u, dgk);

    double ck[3][6];
    for (int a = 0; a < n; ++a)
      for (int s = 0; s < m; ++s) ck[a][s] = covk.comp(a * m + s)[p];

    // g^{ik} g^{jl} g^{pq} (4 D_j k_ik D_q k_pl + 4 D_p k_ij D_q k_kl
    //                       - 6 D_l k_ij D_q k_kp - 2 D_j k_ip D_q k_kl)
    double bracket = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            for (int pp = 0; pp < n; ++pp)
              for (int q = 0; q < n; ++q) {
                double w3 = gi[sym_at(n, i, k)] * gi[sym_at(n, j, l)] * gi[sym_at(n, pp, q)];
                bracket += w3 * (4.0 * ck[j][sym_at(n, i, k)] * ck[q][sym_at(n, pp, l)] +
                                 4.0 * ck[pp][sym_at(n, i, j)] * ck[q][sym_at(n, k, l)] -
                                 6.0 * ck[l][sym_at(n, i, j)] * ck[q][sym_at(n, k, pp)] -
                                 2.0 * ck[j][sym_at(n, i, pp)] * ck[q][sym_at(n, k, l)]);
              }

    double d2R = (Rn[p] - 2.0 * R0[p] + Rp[p]) / (dt * dt);
    double dRdt = (Rn[p] - Rp[p]) / (2.0 * dt);
    double rhs = lapR[p] + 2.0 * ricnorm[p] - (d + 2.0 * u) * dRdt -
                 (1.0 / (n - 1)) * (u * u + dgk) * R0[p] + bracket;
    out[p] = d2R - rhs;
  });
  return out;
}

}  // namespace hypflow
