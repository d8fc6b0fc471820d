#include "hypflow/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "hypflow/parallel.hpp"
#include "hypflow/wrap.hpp"

namespace hypflow {

double sym_min_eig(int n, const double* s) {
  if (n == 2) {
    double a = s[0], b = s[1], c = s[2];
    double tr = a + c;
    double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    return 0.5 * (tr - disc);
  }
  Eigen::Matrix3d m;
  m << s[0], s[1], s[2], s[1], s[3], s[4], s[2], s[4], s[5];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

template <class F>
void for_each_point(const Grid& g, F&& f) {
  const int N = g.n_axis;
  if (g.dim == 2) {
    par::parallel_for(static_cast<std::size_t>(N), [&](std::size_t ix) {
      for (int iy = 0; iy < N; ++iy) f(ix * N + iy, static_cast<int>(ix), iy, 0);
    });
  } else {
    par::parallel_for(static_cast<std::size_t>(N), [&](std::size_t ix) {
      for (int iy = 0; iy < N; ++iy)
        for (int iz = 0; iz < N; ++iz)
          f((ix * N + iy) * N + iz, static_cast<int>(ix), iy, iz);
    });
  }
}

inline void load_sym(const SymTensorField& f, std::size_t p, int m, double* out) {
  for (int c = 0; c < m; ++c) out[c] = f.comp(c)[p];
}

}  // namespace

SymTensorField invert_metric(const MetricField& g) {
  const int n = g.grid().dim;
  const int m = sym_count(n);
  SymTensorField out(g.grid());
  const std::size_t np = g.npts();
  long long bad = static_cast<long long>(np);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : bad)
#endif
  for (long long p = 0; p < static_cast<long long>(np); ++p) {
    double s[6], si[6];
    for (int c = 0; c < m; ++c) s[c] = g.comp(c)[p];
    if (!sym_positive_beyond(n, s, spd_threshold(n, s))) {
      if (p < bad) bad = p;
      continue;
    }
    sym_inverse(n, s, si, nullptr);
    for (int c = 0; c < m; ++c) out.comp(c)[static_cast<std::size_t>(p)] = si[c];
  }
  if (bad < static_cast<long long>(np)) {
    double s[6];
    for (int c = 0; c < m; ++c) s[c] = g.comp(c)[static_cast<std::size_t>(bad)];
    throw DegenerateMetric(static_cast<std::size_t>(bad), sym_min_eig(n, s));
  }
  return out;
}

MetricDerived metric_derived(const MetricField& g, int order) {
  const Grid& gr = g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md{invert_metric(g), {}, ChristoffelField(gr)};
  md.dg.reserve(n);
  for (int a = 0; a < n; ++a) md.dg.push_back(partial(g, a, order));

  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gi[6], d[3][6];
    load_sym(md.inv, p, m, gi);
    for (int a = 0; a < n; ++a) load_sym(md.dg[a], p, m, d[a]);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double v = 0.0;
          for (int q = 0; q < n; ++q)
            v += gi[sym_at(n, k, q)] *
                 (d[i][sym_at(n, q, j)] + d[j][sym_at(n, q, i)] - d[q][sym_at(n, i, j)]);
          md.gamma.comp_kij(k, i, j)[p] = 0.5 * v;
        }
  });
  return md;
}

ChristoffelField christoffel(const MetricField& g, int order) {
  return metric_derived(g, order).gamma;
}

VectorField contracted_christoffel(const SymTensorField& inv, const ChristoffelField& gamma) {
  const Grid& gr = inv.grid();
  const int n = gr.dim;
  VectorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double w = (i == j) ? 1.0 : 2.0;
          v += w * inv.comp(sym_at(n, i, j))[p] * gamma.comp_kij(k, i, j)[p];
        }
      out.comp(k)[p] = v;
    }
  });
  return out;
}

VectorField contracted_christoffel(const MetricField& g, int order) {
  MetricDerived md = metric_derived(g, order);
  return contracted_christoffel(md.inv, md.gamma);
}

namespace {

// Shared Riemann/Ricci kernel. Per point it assembles the local lowered
// Riemann values, optionally stores them, then contracts in a fixed order so
// results do not depend on whether the full tensor is kept.
void ricci_kernel(const MetricField& g, const MetricDerived& md, int order,
                  RiemannField* riem, SymTensorField& ric, ScalarField* scal,
                  ScalarField* rnorm) {
  const Grid& gr = g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  const int npair = pair_count(n);
  const double h = gr.spacing();
  const double c2 = 1.0 / (2.0 * h);
  const double c4 = 1.0 / (12.0 * h);
  const GridWrap wrap(gr);
  const ChristoffelField& gam = md.gamma;

  for_each_point(gr, [&](std::size_t p, int cx, int cy, int cz) {
    const int coords[3] = {cx, cy, cz};
    double gx[6], gi[6], gm[3][6], dgm[3][3][6];
    load_sym(g, p, m, gx);
    load_sym(md.inv, p, m, gi);
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < m; ++s) gm[k][s] = gam.comp(k * m + s)[p];

    for (int a = 0; a < n; ++a) {
      const WrapTable& w = wrap.axis[a];
      const int ca = coords[a];
      if (order == 2) {
        const long long p1 = w.p1[ca], m1 = w.m1[ca];
        for (int k = 0; k < n; ++k)
          for (int s = 0; s < m; ++s) {
            const double* gc = gam.comp(k * m + s);
            dgm[a][k][s] = c2 * (gc[p + p1] - gc[p + m1]);
          }
      } else {
        const long long p1 = w.p1[ca], m1 = w.m1[ca], p2 = w.p2[ca], m2 = w.m2[ca];
        for (int k = 0; k < n; ++k)
          for (int s = 0; s < m; ++s) {
            const double* gc = gam.comp(k * m + s);
            dgm[a][k][s] = c4 * (-gc[p + p2] + 8.0 * gc[p + p1] - 8.0 * gc[p + m1] + gc[p + m2]);
          }
      }
    }

    // Riem^mu_{j kl} for k<l, then lower the first index.
    double rup[3][3][3], rlo[3][3][3];
    for (int mu = 0; mu < n; ++mu)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k + 1; l < n; ++l) {
            double v = dgm[k][mu][sym_at(n, l, j)] - dgm[l][mu][sym_at(n, k, j)];
            for (int q = 0; q < n; ++q)
              v += gm[mu][sym_at(n, k, q)] * gm[q][sym_at(n, l, j)] -
                   gm[mu][sym_at(n, l, q)] * gm[q][sym_at(n, k, j)];
            rup[mu][j][pair_index(n, k, l)] = v;
          }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int pr = 0; pr < npair; ++pr) {
          double v = 0.0;
          for (int mu = 0; mu < n; ++mu) v += gx[sym_at(n, i, mu)] * rup[mu][j][pr];
          rlo[i][j][pr] = v;
        }

    if (riem)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int pr = 0; pr < npair; ++pr) riem->comp_ijp(i, j, pr)[p] = rlo[i][j][pr];

    auto rval = [&](int i, int j, int k, int l) -> double {
      if (k == l) return 0.0;
      return k < l ? rlo[i][j][pair_index(n, k, l)] : -rlo[i][j][pair_index(n, l, k)];
    };

    double raw[3][3];
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) v += gi[sym_at(n, j, l)] * rval(i, j, k, l);
        raw[i][k] = v;
      }
    double rc[3][3];
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) {
        double v = 0.5 * (raw[i][k] + raw[k][i]);
        rc[i][k] = v;
        rc[k][i] = v;
        ric.comp(sym_at(n, i, k))[p] = v;
      }

    if (scal) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) v += gi[sym_at(n, i, k)] * rc[i][k];
      scal->values()[p] = v;
    }
    if (rnorm) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double up = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              up += gi[sym_at(n, i, a)] * gi[sym_at(n, j, b)] * rc[a][b];
          v += up * rc[i][j];
        }
      rnorm->values()[p] = v;
    }
  });
}

}  // namespace

SymTensorField ricci_tensor(const MetricField& g, const MetricDerived& md, int order,
                            RiemannField* riemann_sink, ScalarField* scalar_out,
                            ScalarField* ricci_norm_sq_out) {
  SymTensorField ric(g.grid());
  ricci_kernel(g, md, order, riemann_sink, ric, scalar_out, ricci_norm_sq_out);
  return ric;
}

CurvatureBundle curvature(const MetricField& g, int order) {
  MetricDerived md = metric_derived(g, order);
  CurvatureBundle b{md.gamma, contracted_christoffel(md.inv, md.gamma), RiemannField(g.grid()),
                    SymTensorField(g.grid()), ScalarField(g.grid()), ScalarField(g.grid())};
  ricci_kernel(g, md, order, &b.riemann, b.ricci, &b.scalar, &b.ricci_norm_sq);
  return b;
}

ScalarField scalar_curvature(const MetricField& g, int order) {
  MetricDerived md = metric_derived(g, order);
  ScalarField scal(g.grid());
  SymTensorField ric(g.grid());
  ricci_kernel(g, md, order, nullptr, ric, &scal, nullptr);
  return scal;
}

SymTensorField metric_wave_operator(const SymTensorField& T, const SymTensorField& inv,
                                    int order) {
  const Grid& gr = T.grid();
  const int n = gr.dim;
  SymTensorField out(gr);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      SymTensorField d2 = second_partial(T, k, l, order);
      const double w = (k == l) ? 1.0 : 2.0;
      const double* ikl = inv.comp(sym_at(n, k, l));
      for (int c = 0; c < out.ncomp(); ++c) {
        double* o = out.comp(c);
        const double* d = d2.comp(c);
        par::parallel_for(gr.npts(), [&](std::size_t p) { o[p] += w * ikl[p] * d[p]; });
      }
    }
  return out;
}

SymTensorField ricci_via_expansion(const MetricField& g, int order) {
  const Grid& gr = g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md = metric_derived(g, order);
  VectorField contr = contracted_christoffel(md.inv, md.gamma);
  std::vector<VectorField> dcontr;
  for (int a = 0; a < n; ++a) dcontr.push_back(partial(contr, a, order));
  SymTensorField wave = metric_wave_operator(g, md.inv, order);

  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6], gi[6], gm[3][6], d[3][6];
    load_sym(g, p, m, gx);
    load_sym(md.inv, p, m, gi);
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < m; ++s) gm[k][s] = md.gamma.comp(k * m + s)[p];
    for (int a = 0; a < n; ++a) load_sym(md.dg[a], p, m, d[a]);

    // W^k_j = Gamma^k_rs g^{pr} g^{qs} d_j g_pq = Gamma^k_rs (g^-1 d_j g g^-1)^{rs}
    double W[3][3];
    for (int j = 0; j < n; ++j) {
      double Mj[3][3];
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = 0.0;
          for (int pq = 0; pq < n; ++pq)
            for (int q = 0; q < n; ++q)
              v += gi[sym_at(n, pq, r)] * gi[sym_at(n, q, s)] * d[j][sym_at(n, pq, q)];
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
        double e = -wave.comp(sym_at(n, i, j))[p];
        for (int k = 0; k < n; ++k)
          e += gx[sym_at(n, i, k)] * dcontr[j].comp(k)[p] +
               gx[sym_at(n, j, k)] * dcontr[i].comp(k)[p];
        double quad = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int pp = 0; pp < n; ++pp)
              for (int q = 0; q < n; ++q)
                quad += gi[sym_at(n, k, l)] * gx[sym_at(n, pp, q)] *
                        gm[pp][sym_at(n, i, k)] * gm[q][sym_at(n, j, l)];
        e += 2.0 * quad;
        for (int k = 0; k < n; ++k) e += d[k][sym_at(n, i, j)] * contr.comp(k)[p];
        for (int k = 0; k < n; ++k)
          e += gx[sym_at(n, i, k)] * W[k][j] + gx[sym_at(n, j, k)] * W[k][i];
        out.comp(sym_at(n, i, j))[p] = 0.5 * e;
      }
  });
  return out;
}

Rank3SymField covariant_derivative_sym2(const SymTensorField& T, const ChristoffelField& gamma,
                                        int order) {
  const Grid& gr = T.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  Rank3SymField out(gr);
  std::vector<SymTensorField> dT;
  for (int a = 0; a < n; ++a) dT.push_back(partial(T, a, order));
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double tv[6], gm[3][6];
    load_sym(T, p, m, tv);
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < m; ++s) gm[k][s] = gamma.comp(k * m + s)[p];
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double v = dT[k].comp(sym_at(n, i, j))[p];
          for (int q = 0; q < n; ++q)
            v -= gm[q][sym_at(n, k, i)] * tv[sym_at(n, q, j)] +
                 gm[q][sym_at(n, k, j)] * tv[sym_at(n, i, q)];
          out.comp_kij(k, i, j)[p] = v;
        }
  });
  return out;
}

SymTensorField hessian(const ScalarField& f, const ChristoffelField& gamma, int order) {
  const Grid& gr = f.grid();
  const int n = gr.dim;
  SymTensorField out(gr);
  std::vector<ScalarField> df;
  for (int a = 0; a < n; ++a) df.push_back(partial(f, a, order));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ScalarField d2 = second_partial(f, i, j, order);
      double* o = out.comp_ij(i, j);
      par::parallel_for(gr.npts(), [&](std::size_t p) {
        double v = d2.values()[p];
        for (int q = 0; q < n; ++q) v -= gamma.comp_kij(q, i, j)[p] * df[q].values()[p];
        o[p] = v;
      });
    }
  return out;
}

MatrixField covariant_gradient(const VectorField& v, const ChristoffelField& gamma, int order) {
  const Grid& gr = v.grid();
  const int n = gr.dim;
  MatrixField out(gr);
  std::vector<VectorField> dv;
  for (int a = 0; a < n; ++a) dv.push_back(partial(v, a, order));
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double val = dv[j].comp(k)[p];
        for (int q = 0; q < n; ++q) val += gamma.comp_kij(k, j, q)[p] * v.comp(q)[p];
        out.comp_ab(k, j)[p] = val;
      }
  });
  return out;
}

Rank3Field second_covariant_gradient(const VectorField& v, const MatrixField& grad_v,
                                     const ChristoffelField& gamma, int order) {
  const Grid& gr = v.grid();
  const int n = gr.dim;
  Rank3Field out(gr);
  std::vector<MatrixField> da;
  for (int a = 0; a < n; ++a) da.push_back(partial(grad_v, a, order));
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    for (int pp = 0; pp < n; ++pp)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          double val = da[k].comp_ab(pp, j)[p];
          for (int q = 0; q < n; ++q)
            val += gamma.comp_kij(pp, k, q)[p] * grad_v.comp_ab(q, j)[p] -
                   gamma.comp_kij(q, k, j)[p] * grad_v.comp_ab(pp, q)[p];
          out.comp_abc(pp, k, j)[p] = val;
        }
  });
  return out;
}

ScalarField laplace_beltrami(const ScalarField& s, const SymTensorField& inv,
                             const VectorField& contracted, int order) {
  const Grid& gr = s.grid();
  const int n = gr.dim;
  ScalarField out(gr);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      ScalarField d2 = second_partial(s, k, l, order);
      const double w = (k == l) ? 1.0 : 2.0;
      const double* ikl = inv.comp(sym_at(n, k, l));
      par::parallel_for(gr.npts(), [&](std::size_t p) { out.values()[p] += w * ikl[p] * d2.values()[p]; });
    }
  for (int a = 0; a < n; ++a) {
    ScalarField ds = partial(s, a, order);
    par::parallel_for(gr.npts(), [&](std::size_t p) {
      out.values()[p] -= contracted.comp(a)[p] * ds.values()[p];
    });
  }
  return out;
}

ScalarField sqrt_det_metric(const MetricField& g) {
  const int n = g.grid().dim;
  const int m = sym_count(n);
  ScalarField out(g.grid());
  par::parallel_for(g.npts(), [&](std::size_t p) {
    double s[6];
    for (int c = 0; c < m; ++c) s[c] = g.comp(c)[p];
    out.values()[p] = std::sqrt(sym_det(n, s));
  });
  return out;
}

double integral(const ScalarField& f, const ScalarField& weight) {
  const Grid& gr = f.grid();
  double cell = std::pow(gr.spacing(), gr.dim);
  return cell * par::chunked_sum(gr.npts(), [&](std::size_t p) {
           return f.values()[p] * weight.values()[p];
         });
}

double integral_flat(const ScalarField& f) {
  const Grid& gr = f.grid();
  double cell = std::pow(gr.spacing(), gr.dim);
  return cell * par::chunked_sum(gr.npts(), [&](std::size_t p) { return f.values()[p]; });
}

double divergence_integral(const VectorField& x_up, const MetricField& g, int order) {
  const Grid& gr = g.grid();
  const int n = gr.dim;
  ScalarField sg = sqrt_det_metric(g);
  ScalarField sum(gr);
  ScalarField flux(gr), dflux(gr);
  for (int a = 0; a < n; ++a) {
    par::parallel_for(gr.npts(), [&](std::size_t p) {
      flux.values()[p] = sg.values()[p] * x_up.comp(a)[p];
    });
    diff1(gr, flux.values(), dflux.values(), a, order);
    par::parallel_for(gr.npts(), [&](std::size_t p) { sum.values()[p] += dflux.values()[p]; });
  }
  double cell = std::pow(gr.spacing(), gr.dim);
  return cell * par::chunked_sum(gr.npts(), [&](std::size_t p) { return sum.values()[p]; });
}

double min_metric_eigenvalue(const MetricField& g) {
  const int n = g.grid().dim;
  const int m = sym_count(n);
  return par::chunked_min(g.npts(), [&](std::size_t p) {
    double s[6];
    for (int c = 0; c < m; ++c) s[c] = g.comp(c)[p];
    return sym_min_eig(n, s);
  });
}

}  // namespace hypflow
