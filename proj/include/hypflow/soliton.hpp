#ifndef HYPFLOW_SOLITON_HPP
#define HYPFLOW_SOLITON_HPP

#include <optional>

#include "hypflow/geometry.hpp"

namespace hypflow {

/// A candidate steady soliton: metric plus generating vector field V, or a
/// potential f in the gradient case (V = grad f).
struct SolitonCandidate {
  MetricField g;
  std::optional<VectorField> V;
  std::optional<ScalarField> f;
  double d = 1.0;

  SolitonCandidate(MetricField g_, VectorField v_, double d_)
      : g(std::move(g_)), V(std::move(v_)), d(d_) {}
  SolitonCandidate(MetricField g_, ScalarField f_, double d_)
      : g(std::move(g_)), f(std::move(f_)), d(d_) {}
};

/// (L_V g)_ij = g_ik nabla_j V^k + g_jk nabla_i V^k.
SymTensorField lie_derivative_metric(const MetricField& g, const VectorField& v, int order = 2);

/// Lie derivative of a symmetric 2-tensor along V (used as the composition
/// oracle for second_lie).
SymTensorField lie_derivative_sym2(const MetricField& g, const SymTensorField& T,
                                   const VectorField& v, int order = 2);

/// L_V L_V g expanded in covariant derivatives of V.
SymTensorField second_lie(const MetricField& g, const VectorField& v, int order = 2);

/// Residual of the steady soliton equation in the vector-field form.
SymTensorField soliton_residual(const SolitonCandidate& c, int order = 2);

/// Residual of the gradient-soliton equation (third covariant derivatives of f).
SymTensorField gradient_soliton_residual(const SolitonCandidate& c, int order = 2);

/// Residual of the traced equation. Uses the g-trace of the covariant
/// derivative of the Hessian for grad(lap f), the same discrete operator as
/// the tensor residual, so the trace relation holds to rounding.
ScalarField trace_residual(const SolitonCandidate& c, int order = 2);

/// Integral certificate for the compact-manifold nonexistence statement.
struct CertificateReport {
  double r0 = 0.0;                   // average scalar curvature
  double volume = 0.0;
  double divergence_integral = 0.0;  // integral of div(lap f * grad f)
  double dissipative_integral = 0.0; // d * integral of lap f
  double quadratic_integral = 0.0;   // Q, nonnegative for n >= 3
  double hessian_norm_sq = 0.0;      // integral of |Hess f|^2
  double residual_sup = 0.0;         // sup norm of the gradient-equation residual
  double tol_integral = 0.0;
  double tol_residual = 0.0;
  bool is_soliton = false;
  bool implication_holds = false;    // soliton & r0 >= 0  =>  Hess f == 0
  bool pass = false;
};

CertificateReport theorem31_certificate(const SolitonCandidate& c, int order = 2);

}  // namespace hypflow

#endif
