#ifndef HYPFLOW_GEOMETRY_HPP
#define HYPFLOW_GEOMETRY_HPP

#include <vector>

#include "hypflow/fd.hpp"
#include "hypflow/field.hpp"
#include "hypflow/grid.hpp"
#include "hypflow/pointmath.hpp"

namespace hypflow {

/// Everything derivable from one metric snapshot.
struct CurvatureBundle {
  ChristoffelField christoffel;
  VectorField contracted;
  RiemannField riemann;
  SymTensorField ricci;
  ScalarField scalar;
  ScalarField ricci_norm_sq;
};

/// First derivatives shared by several downstream kernels.
struct MetricDerived {
  SymTensorField inv;
  std::vector<SymTensorField> dg;  // dg[a] = partial_a g
  ChristoffelField gamma;
};

/// Pointwise inverse of an SPD metric. Throws DegenerateMetric if any point
/// has min eigenvalue <= 1e-10 * (max diagonal there).
SymTensorField invert_metric(const MetricField& g);

MetricDerived metric_derived(const MetricField& g, int order = 2);

ChristoffelField christoffel(const MetricField& g, int order = 2);

VectorField contracted_christoffel(const MetricField& g, int order = 2);
VectorField contracted_christoffel(const SymTensorField& inv, const ChristoffelField& gamma);

/// Ricci tensor from the Riemann contraction. When `riemann_sink` is given the
/// lowered Riemann tensor is stored as well; ricci values are computed from
/// the identical per-point Riemann values either way, so both paths are
/// bit-equal.
SymTensorField ricci_tensor(const MetricField& g, const MetricDerived& md, int order = 2,
                            RiemannField* riemann_sink = nullptr,
                            ScalarField* scalar_out = nullptr,
                            ScalarField* ricci_norm_sq_out = nullptr);

CurvatureBundle curvature(const MetricField& g, int order = 2);

/// Scalar curvature only (cheaper than the full bundle).
ScalarField scalar_curvature(const MetricField& g, int order = 2);

/// Ricci tensor evaluated from the second-derivative expansion identity
/// (wave-operator principal part plus contracted-Christoffel and quadratic
/// Christoffel terms). Agrees with ricci_tensor to discretization error.
SymTensorField ricci_via_expansion(const MetricField& g, int order = 2);

/// g^{kl} d_k d_l applied componentwise to a symmetric tensor.
SymTensorField metric_wave_operator(const SymTensorField& T, const SymTensorField& inv,
                                    int order = 2);

/// nabla_k T_ij for a symmetric 2-tensor.
Rank3SymField covariant_derivative_sym2(const SymTensorField& T, const ChristoffelField& gamma,
                                        int order = 2);

/// Covariant Hessian of a scalar.
SymTensorField hessian(const ScalarField& f, const ChristoffelField& gamma, int order = 2);

/// nabla_j V^k (mixed, row = upper index k, column = j).
MatrixField covariant_gradient(const VectorField& v, const ChristoffelField& gamma,
                               int order = 2);

/// nabla_k nabla_j V^p stored as (p, k, j).
Rank3Field second_covariant_gradient(const VectorField& v, const MatrixField& grad_v,
                                     const ChristoffelField& gamma, int order = 2);

/// Laplace-Beltrami of a scalar: g^{kl} d_k d_l s - Gamma^m d_m s.
ScalarField laplace_beltrami(const ScalarField& s, const SymTensorField& inv,
                             const VectorField& contracted, int order = 2);

ScalarField sqrt_det_metric(const MetricField& g);

/// Periodic trapezoidal integral with an explicit weight field.
double integral(const ScalarField& f, const ScalarField& weight);
double integral_flat(const ScalarField& f);

/// Integral of the covariant divergence of a raised vector field over the
/// torus, evaluated in flux form d_k(sqrt(g) X^k); the periodic sum
/// telescopes, so the discrete divergence theorem holds to rounding.
double divergence_integral(const VectorField& x_up, const MetricField& g, int order = 2);

/// Global minimum metric eigenvalue (diagnostic).
double min_metric_eigenvalue(const MetricField& g);

}  // namespace hypflow

#endif
