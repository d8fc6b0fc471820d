#ifndef HYPFLOW_REDUCTION_HPP
#define HYPFLOW_REDUCTION_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hypflow/flow.hpp"

namespace hypflow {

/// Dimension of the stacked (g_ij, g_ij,k, h_ij) unknown vector.
inline int system_dimension(int n) { return n * (n + 1) * (n + 2) / 2; }

/// Grid field of stacked first-order unknowns, block order
/// [g (m) | spatial derivatives g_,1..g_,n (n*m) | h (m)], m = n(n+1)/2.
class FirstOrderField : public FieldStorage {
 public:
  explicit FirstOrderField(const Grid& g) : FieldStorage(g, system_dimension(g.dim)) {}
  int block_size() const { return sym_count(grid_.dim); }
  double* g_comp(int s) { return comp(s); }
  double* spatial_comp(int k, int s) { return comp((1 + k) * block_size() + s); }
  double* h_comp(int s) { return comp((1 + grid_.dim) * block_size() + s); }
  const double* g_comp(int s) const { return comp(s); }
  const double* spatial_comp(int k, int s) const { return comp((1 + k) * block_size() + s); }
  const double* h_comp(int s) const { return comp((1 + grid_.dim) * block_size() + s); }
};

/// Coefficient matrices of the first-order system A0 du/dt = A^j d_j u + B
/// at one grid point.
struct SystemMatrices {
  int dim = 0;
  Eigen::MatrixXd A0;
  std::vector<Eigen::MatrixXd> Aj;
  Eigen::VectorXd B;
};

struct HyperbolicityReport {
  bool a0_symmetric = false;
  bool aj_symmetric = false;
  double min_eig_a0 = 0.0;
  bool pass = false;
  std::string detail;
};

struct ConstraintNorms {
  double sup = 0.0;
  double l2 = 0.0;
};

/// Stack (g, D_k g, k) into the first-order unknown field.
FirstOrderField assemble_state(const FlowState& state, int order = 2);

/// The gauge-fixed source: Christoffel-quadratic terms plus the velocity
/// coupling of the flow (everything except the principal wave operator).
SymTensorField source_Htilde(const FlowState& state, const FlowParams& params, int order = 2);

/// Gauge-fixed second-order right-hand side g^{kl} d_k d_l g_ij + Htilde_ij,
/// valid where the contracted Christoffel vanishes.
SymTensorField gauge_fixed_rhs(const FlowState& state, const FlowParams& params, int order = 2);

/// Right-hand side of the first-order system with A0 inverted through its
/// block structure (identity / metric-block / identity), never densely.
FirstOrderField first_order_rhs(const FlowState& state, const FirstOrderField& u,
                                const FlowParams& params, int order = 2);

/// Coefficient matrices at a point with packed metric g (and optionally the
/// packed velocity and source filling B). The metric is inverted as a plain
/// matrix so that indefinite inputs can be fed to the verifier.
SystemMatrices assemble_matrices(int n, const double* g_packed, const double* h_packed = nullptr,
                                 const double* htilde_packed = nullptr);

/// Checks A0 = A0^T and Aj = Aj^T exactly and min eig(A0) > 0.
HyperbolicityReport verify_symmetric_hyperbolic(const SystemMatrices& m);

/// Sup and L2 norm of the contracted Christoffel (harmonic-gauge monitor).
ConstraintNorms harmonic_constraint_monitor(const MetricField& g, int order = 2);
ConstraintNorms harmonic_constraint_monitor(const VectorField& contracted);

}  // namespace hypflow

#endif
