#ifndef HYPFLOW_FLOW_HPP
#define HYPFLOW_FLOW_HPP

#include <stdexcept>

#include "hypflow/field.hpp"
#include "hypflow/geometry.hpp"

namespace hypflow {

struct FlowParams {
  int dim = 3;
  double d = 1.0;  // dissipative coefficient, strictly positive
  FlowParams() = default;
  FlowParams(int dim_, double d_) : dim(dim_), d(d_) {
    if (dim < 2) throw std::invalid_argument("FlowParams: dim must be >= 2");
    if (!(d > 0.0)) throw std::invalid_argument("FlowParams: d must be positive");
  }
};

/// Coefficients of the general velocity-coupling family
///   G_ij = a g^{pq} k_ip k_jq + b u k_ij + d_raw k_ij + e u g_ij
///          + f u^2 g_ij + h (dg^{pq}/dt k_pq) g_ij ,   u = g^{pq} k_pq.
struct CoefficientSet {
  double a = 0, b = 0, d_raw = 0, e = 0, f = 0, h = 0;

  static CoefficientSet zero() { return {}; }

  /// Specialization that yields the dissipative flow (with the sign flip that
  /// turns the raw coefficient into a friction term for d > 0).
  static CoefficientSet dissipative(int n, double d) {
    CoefficientSet c;
    c.a = 2.0;
    c.b = -2.0;
    c.d_raw = -d;
    c.e = 0.0;
    c.f = 1.0 / (n - 1);
    c.h = 1.0 / (n - 1);
    return c;
  }
};

/// Unknowns of the second-order system: time, metric and metric velocity.
struct FlowState {
  double t = 0.0;
  SymTensorField g;
  SymTensorField k;  // dg/dt

  FlowState(double t_, SymTensorField g_, SymTensorField k_)
      : t(t_), g(std::move(g_)), k(std::move(k_)) {
    if (g.grid() != k.grid()) throw std::invalid_argument("FlowState: g and k grids differ");
  }
};

/// u = tr G, v = tr G^2, w = tr G^3 with G = k g^{-1}; v is assembled as a
/// Frobenius norm of a congruence-transformed matrix so it is nonnegative by
/// construction.
struct TraceDiagnostics {
  ScalarField u;
  ScalarField v;
  ScalarField w;
  MatrixField G_matrix;  // G_i^k = k_ij g^{jk}
};

SymTensorField general_G(const SymTensorField& g, const SymTensorField& k,
                         const CoefficientSet& coeffs);
SymTensorField general_G(const SymTensorField& g, const SymTensorField& k,
                         const SymTensorField& inv, const CoefficientSet& coeffs);

/// Full flow right-hand side: d^2 g / dt^2 = -2 Ric(g) + G_dissipative(g, k).
SymTensorField dissipative_rhs(const FlowState& state, const FlowParams& params, int order = 2);

TraceDiagnostics trace_quantities(const FlowState& state);

/// Residual of the u evolution identity on three consecutive snapshots
/// (centered time difference minus the curvature/trace right-hand side).
ScalarField u_evolution_residual(const FlowState& prev, const FlowState& mid,
                                 const FlowState& next, const FlowParams& params,
                                 int order = 2);

ScalarField v_evolution_residual(const FlowState& prev, const FlowState& mid,
                                 const FlowState& next, const FlowParams& params,
                                 int order = 2);

/// Residual of the nonlinear scalar-curvature wave equation (covariant form of
/// the quadratic first-derivative bracket).
ScalarField scalar_wave_residual(const FlowState& prev, const FlowState& mid,
                                 const FlowState& next, const FlowParams& params,
                                 int order = 2);

}  // namespace hypflow

#endif
