#include "hypflow/soliton.hpp"

#include <cmath>
#include <stdexcept>

#include "hypflow/parallel.hpp"

namespace hypflow {

namespace {

inline void load_sym(const SymTensorField& f, std::size_t p, int m, double* out) {
  for (int c = 0; c < m; ++c) out[c] = f.comp(c)[p];
}

}  // namespace

SymTensorField lie_derivative_metric(const MetricField& g, const VectorField& v, int order) {
  if (g.grid() != v.grid()) throw std::invalid_argument("lie_derivative_metric: grids differ");
  const Grid& gr = g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md = metric_derived(g, order);
  MatrixField A = covariant_gradient(v, md.gamma, order);
  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6];
    load_sym(g, p, m, gx);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double val = 0.0;
        for (int k = 0; k < n; ++k)
          val += gx[sym_at(n, i, k)] * A.comp_ab(k, j)[p] +
                 gx[sym_at(n, j, k)] * A.comp_ab(k, i)[p];
        out.comp(sym_at(n, i, j))[p] = val;
      }
  });
  return out;
}

SymTensorField lie_derivative_sym2(const MetricField& g, const SymTensorField& T,
                                   const VectorField& v, int order) {
  const Grid& gr = g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md = metric_derived(g, order);
  MatrixField A = covariant_gradient(v, md.gamma, order);
  Rank3SymField dT = covariant_derivative_sym2(T, md.gamma, order);
  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double tv[6];
    load_sym(T, p, m, tv);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double val = 0.0;
        for (int k = 0; k < n; ++k) {
          val += v.comp(k)[p] * dT.comp_kij(k, i, j)[p];
          val += tv[sym_at(n, k, j)] * A.comp_ab(k, i)[p] +
                 tv[sym_at(n, i, k)] * A.comp_ab(k, j)[p];
        }
        out.comp(sym_at(n, i, j))[p] = val;
      }
  });
  return out;
}

SymTensorField second_lie(const MetricField& g, const VectorField& v, int order) {
  const Grid& gr = g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md = metric_derived(g, order);
  MatrixField A = covariant_gradient(v, md.gamma, order);
  Rank3Field S = second_covariant_gradient(v, A, md.gamma, order);
  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6];
    load_sym(g, p, m, gx);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double val = 0.0;
        for (int k = 0; k < n; ++k)
          for (int q = 0; q < n; ++q)
            val += (gx[sym_at(n, i, q)] * S.comp_abc(q, k, j)[p] +
                    gx[sym_at(n, j, q)] * S.comp_abc(q, k, i)[p]) *
                   v.comp(k)[p];
        for (int k = 0; k < n; ++k)
          for (int q = 0; q < n; ++q) {
            val += gx[sym_at(n, k, q)] *
                   (A.comp_ab(k, i)[p] * A.comp_ab(q, j)[p] +
                    A.comp_ab(k, j)[p] * A.comp_ab(q, i)[p]);
            val += gx[sym_at(n, i, q)] * A.comp_ab(k, j)[p] * A.comp_ab(q, k)[p] +
                   gx[sym_at(n, j, q)] * A.comp_ab(k, i)[p] * A.comp_ab(q, k)[p];
          }
        out.comp(sym_at(n, i, j))[p] = val;
      }
  });
  return out;
}

SymTensorField soliton_residual(const SolitonCandidate& c, int order) {
  if (!c.V) throw std::invalid_argument("soliton_residual: candidate has no vector field");
  const Grid& gr = c.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  MetricDerived md = metric_derived(c.g, order);
  SymTensorField ric = ricci_tensor(c.g, md, order);
  MatrixField A = covariant_gradient(*c.V, md.gamma, order);
  Rank3Field S = second_covariant_gradient(*c.V, A, md.gamma, order);
  const double d = c.d;
  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6], gi[6], Av[3][3];
    load_sym(c.g, p, m, gx);
    load_sym(md.inv, p, m, gi);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) Av[k][j] = A.comp_ab(k, j)[p];
    double divv = 0.0;
    for (int k = 0; k < n; ++k) divv += Av[k][k];
    double mixed = 0.0, sq = 0.0;  // g_kl g^{pq} A^k_p A^l_q  and  A^q_p A^p_q
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int pp = 0; pp < n; ++pp)
          for (int q = 0; q < n; ++q)
            mixed += gx[sym_at(n, k, l)] * gi[sym_at(n, pp, q)] * Av[k][pp] * Av[l][q];
    for (int pp = 0; pp < n; ++pp)
      for (int q = 0; q < n; ++q) sq += Av[q][pp] * Av[pp][q];

    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double lhs = 2.0 * ric.comp(sym_at(n, i, j))[p];
        for (int k = 0; k < n; ++k)
          for (int q = 0; q < n; ++q)
            lhs += (gx[sym_at(n, i, q)] * S.comp_abc(q, k, j)[p] +
                    gx[sym_at(n, j, q)] * S.comp_abc(q, k, i)[p]) *
                   c.V->comp(k)[p];
        double rhs = 0.0;
        for (int pp = 0; pp < n; ++pp)
          for (int q = 0; q < n; ++q)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l)
                rhs += 2.0 * gi[sym_at(n, pp, q)] * gx[sym_at(n, i, k)] *
                       gx[sym_at(n, j, l)] * Av[k][pp] * Av[l][q];
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            rhs += gx[sym_at(n, i, k)] * Av[l][j] * Av[k][l] +
                   gx[sym_at(n, j, k)] * Av[l][i] * Av[k][l];
        double tij = 0.0;
        for (int l = 0; l < n; ++l)
          tij += gx[sym_at(n, i, l)] * Av[l][j] + gx[sym_at(n, j, l)] * Av[l][i];
        rhs -= (d + 4.0 * divv) * tij;
        rhs += (4.0 / (n - 1)) * divv * divv * gx[sym_at(n, i, j)];
        rhs -= (2.0 / (n - 1)) * (mixed + sq) * gx[sym_at(n, i, j)];
        out.comp(sym_at(n, i, j))[p] = lhs - rhs;
      }
  });
  return out;
}

namespace {

struct GradientParts {
  MetricDerived md;
  SymTensorField ric;
  ScalarField scal;
  SymTensorField hess;
  Rank3SymField cov_hess;
  VectorField grad_up;
};

GradientParts gradient_parts(const SolitonCandidate& c, int order) {
  const Grid& gr = c.g.grid();
  const int n = gr.dim;
  MetricDerived md = metric_derived(c.g, order);
  ScalarField scal(gr);
  SymTensorField ric = ricci_tensor(c.g, md, order, nullptr, &scal);
  SymTensorField hess = hessian(*c.f, md.gamma, order);
  Rank3SymField cov_hess = covariant_derivative_sym2(hess, md.gamma, order);
  VectorField grad_up(gr);
  std::vector<ScalarField> df;
  for (int a = 0; a < n; ++a) df.push_back(partial(*c.f, a, order));
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      for (int a = 0; a < n; ++a) v += md.inv.comp(sym_at(n, k, a))[p] * df[a][p];
      grad_up.comp(k)[p] = v;
    }
  });
  return {std::move(md), std::move(ric), std::move(scal), std::move(hess), std::move(cov_hess),
          std::move(grad_up)};
}

inline void lap_and_hess2(int n, const double* gi, const double* hv, double& lap,
                          double& hess2) {
  lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap += gi[sym_at(n, i, j)] * hv[sym_at(n, i, j)];
  hess2 = 0.0;
  for (int pp = 0; pp < n; ++pp)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          hess2 += gi[sym_at(n, pp, q)] * gi[sym_at(n, k, l)] * hv[sym_at(n, pp, k)] *
                   hv[sym_at(n, q, l)];
}

}  // namespace

SymTensorField gradient_soliton_residual(const SolitonCandidate& c, int order) {
  if (!c.f) throw std::invalid_argument("gradient_soliton_residual: candidate has no potential");
  const Grid& gr = c.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  GradientParts gp = gradient_parts(c, order);
  const double d = c.d;
  SymTensorField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gx[6], gi[6], hv[6];
    load_sym(c.g, p, m, gx);
    load_sym(gp.md.inv, p, m, gi);
    load_sym(gp.hess, p, m, hv);
    double lap, hess2;
    lap_and_hess2(n, gi, hv, lap, hess2);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double lhs = gp.ric.comp(sym_at(n, i, j))[p];
        for (int k = 0; k < n; ++k) lhs += gp.cov_hess.comp_kij(k, i, j)[p] * gp.grad_up.comp(k)[p];
        double quad = 0.0;
        for (int pp = 0; pp < n; ++pp)
          for (int q = 0; q < n; ++q)
            quad += gi[sym_at(n, pp, q)] * hv[sym_at(n, pp, i)] * hv[sym_at(n, q, j)];
        double rhs = 2.0 * quad - (d + 4.0 * lap) * hv[sym_at(n, i, j)] +
                     (2.0 / (n - 1)) * (lap * lap - hess2) * gx[sym_at(n, i, j)];
        out.comp(sym_at(n, i, j))[p] = lhs - rhs;
      }
  });
  return out;
}

ScalarField trace_residual(const SolitonCandidate& c, int order) {
  if (!c.f) throw std::invalid_argument("trace_residual: candidate has no potential");
  const Grid& gr = c.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  GradientParts gp = gradient_parts(c, order);
  const double d = c.d;
  ScalarField out(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gi[6], hv[6];
    load_sym(gp.md.inv, p, m, gi);
    load_sym(gp.hess, p, m, hv);
    double lap, hess2;
    lap_and_hess2(n, gi, hv, lap, hess2);
    // grad(lap f)_k as the g-trace of the covariant Hessian derivative
    double divterm = 0.0;
    for (int k = 0; k < n; ++k) {
      double gl = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          gl += gi[sym_at(n, i, j)] * gp.cov_hess.comp_kij(k, i, j)[p];
      divterm += gl * gp.grad_up.comp(k)[p];
    }
    out[p] = gp.scal[p] + divterm + lap * lap + (2.0 / (n - 1)) * hess2 +
             (double(n - 3) / (n - 1)) * lap * lap + d * lap;
  });
  return out;
}

CertificateReport theorem31_certificate(const SolitonCandidate& c, int order) {
  if (!c.f) throw std::invalid_argument("theorem31_certificate: candidate has no potential");
  const Grid& gr = c.g.grid();
  const int n = gr.dim;
  const int m = sym_count(n);
  const double h = gr.spacing();
  GradientParts gp = gradient_parts(c, order);
  ScalarField sg = sqrt_det_metric(c.g);
  ScalarField ones(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) { ones[p] = 1.0; });

  CertificateReport rep;
  rep.volume = integral(ones, sg);
  rep.r0 = integral(gp.scal, sg) / rep.volume;

  ScalarField lapf(gr), hess2f(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    double gi[6], hv[6];
    load_sym(gp.md.inv, p, m, gi);
    load_sym(gp.hess, p, m, hv);
    double lap, hess2;
    lap_and_hess2(n, gi, hv, lap, hess2);
    lapf[p] = lap;
    hess2f[p] = hess2;
  });

  VectorField flux(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    for (int k = 0; k < n; ++k) flux.comp(k)[p] = lapf[p] * gp.grad_up.comp(k)[p];
  });
  rep.divergence_integral = divergence_integral(flux, c.g, order);
  rep.dissipative_integral = c.d * divergence_integral(gp.grad_up, c.g, order);

  ScalarField qdens(gr);
  par::parallel_for(gr.npts(), [&](std::size_t p) {
    qdens[p] = (2.0 / (n - 1)) * hess2f[p] + (double(n - 3) / (n - 1)) * lapf[p] * lapf[p];
  });
  rep.quadratic_integral = integral(qdens, sg);
  rep.hessian_norm_sq = integral(hess2f, sg);

  SymTensorField res = gradient_soliton_residual(c, order);
  rep.residual_sup = par::chunked_max(gr.npts(), [&](std::size_t p) {
    double v = 0.0;
    for (int cmp = 0; cmp < res.ncomp(); ++cmp) v = std::max(v, std::abs(res.comp(cmp)[p]));
    return v;
  });

  double ric_sup = par::chunked_max(gr.npts(), [&](std::size_t p) {
    double v = 0.0;
    for (int cmp = 0; cmp < gp.ric.ncomp(); ++cmp) v = std::max(v, std::abs(gp.ric.comp(cmp)[p]));
    return v;
  });
  double hess_sup = par::chunked_max(gr.npts(), [&](std::size_t p) { return std::abs(hess2f[p]); });
  double scale = 1.0 + ric_sup + hess_sup;
  rep.tol_residual = std::max(1e-8, 10.0 * h * h * scale);
  // the flux-form divergence integrals telescope, so rounding is the only error
  rep.tol_integral = std::max(1e-8, 1e-13 * scale * rep.volume);

  rep.is_soliton = rep.residual_sup <= rep.tol_residual;
  bool premise = rep.is_soliton && rep.r0 >= -rep.tol_integral;
  rep.implication_holds =
      !premise || rep.hessian_norm_sq <= std::max(1e-8, 10.0 * h * h * scale) * rep.volume;
  rep.pass = rep.implication_holds && (n < 3 || rep.quadratic_integral >= -rep.tol_integral);
  return rep;
}

}  // namespace hypflow
