#ifndef HYPFLOW_FIELD_HPP
#define HYPFLOW_FIELD_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypflow/grid.hpp"

namespace hypflow {

/// Raised when a metric stops being positive definite (a detected flow event,
/// not a programming error).
struct DegenerateMetric : std::runtime_error {
  std::size_t point;
  double min_eigenvalue;
  DegenerateMetric(std::size_t p, double eig)
      : std::runtime_error("metric degenerate at point " + std::to_string(p) +
                           ", min eigenvalue " + std::to_string(eig)),
        point(p), min_eigenvalue(eig) {}
};

/// Raised when the homothetic scale factor reaches zero.
struct DegenerateScale : std::runtime_error {
  double time;
  explicit DegenerateScale(double t)
      : std::runtime_error("scale factor degenerate at t = " + std::to_string(t)), time(t) {}
};

/// Raised when an evolved field stops being finite.
struct NonFinite : std::runtime_error {
  double time;
  explicit NonFinite(double t)
      : std::runtime_error("non-finite field values at t = " + std::to_string(t)), time(t) {}
};

/// Storage shared by all grid fields: ncomp contiguous component planes.
class FieldStorage {
 public:
  FieldStorage(const Grid& g, int ncomp)
      : grid_(g), ncomp_(ncomp), data_(static_cast<std::size_t>(ncomp) * g.npts(), 0.0) {}

  const Grid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  std::size_t npts() const { return grid_.npts(); }

  double* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * npts(); }
  const double* comp(int c) const { return data_.data() + static_cast<std::size_t>(c) * npts(); }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 protected:
  Grid grid_;
  int ncomp_;
  std::vector<double> data_;
};

class ScalarField : public FieldStorage {
 public:
  explicit ScalarField(const Grid& g) : FieldStorage(g, 1) {}
  double* values() { return comp(0); }
  const double* values() const { return comp(0); }
  double& operator[](std::size_t p) { return data_[p]; }
  double operator[](std::size_t p) const { return data_[p]; }
};

class VectorField : public FieldStorage {
 public:
  explicit VectorField(const Grid& g) : FieldStorage(g, g.dim) {}
};

/// Symmetric 2-tensor sampled on the grid, packed upper triangle.
class SymTensorField : public FieldStorage {
 public:
  explicit SymTensorField(const Grid& g) : FieldStorage(g, sym_count(g.dim)) {}
  double* comp_ij(int i, int j) { return comp(sym_index(grid_.dim, i, j)); }
  const double* comp_ij(int i, int j) const { return comp(sym_index(grid_.dim, i, j)); }
};

/// A SymTensorField used as a Riemannian metric.
using MetricField = SymTensorField;

/// Rank-3 object symmetric in its last two indices: Gamma^k_(ij) or nabla_k T_(ij).
class Rank3SymField : public FieldStorage {
 public:
  explicit Rank3SymField(const Grid& g) : FieldStorage(g, g.dim * sym_count(g.dim)) {}
  int cindex(int k, int i, int j) const {
    return k * sym_count(grid_.dim) + sym_index(grid_.dim, i, j);
  }
  double* comp_kij(int k, int i, int j) { return comp(cindex(k, i, j)); }
  const double* comp_kij(int k, int i, int j) const { return comp(cindex(k, i, j)); }
};

using ChristoffelField = Rank3SymField;

/// General (1,1) or plain n-by-n matrix field, row index first.
class MatrixField : public FieldStorage {
 public:
  explicit MatrixField(const Grid& g) : FieldStorage(g, g.dim * g.dim) {}
  double* comp_ab(int a, int b) { return comp(a * grid_.dim + b); }
  const double* comp_ab(int a, int b) const { return comp(a * grid_.dim + b); }
};

/// Full rank-3 object with no index symmetry, e.g. nabla_k nabla_j V^p.
class Rank3Field : public FieldStorage {
 public:
  explicit Rank3Field(const Grid& g) : FieldStorage(g, g.dim * g.dim * g.dim) {}
  double* comp_abc(int a, int b, int c) {
    return comp((a * grid_.dim + b) * grid_.dim + c);
  }
  const double* comp_abc(int a, int b, int c) const {
    return comp((a * grid_.dim + b) * grid_.dim + c);
  }
};

/// Fully lowered Riemann tensor R_ijkl, antisymmetric in (k,l) by construction:
/// only pairs k<l are stored, the accessor supplies the sign.
class RiemannField : public FieldStorage {
 public:
  explicit RiemannField(const Grid& g)
      : FieldStorage(g, g.dim * g.dim * pair_count(g.dim)) {}

  int cindex(int i, int j, int pair) const {
    int n = grid_.dim;
    return (i * n + j) * pair_count(n) + pair;
  }
  double* comp_ijp(int i, int j, int pair) { return comp(cindex(i, j, pair)); }
  const double* comp_ijp(int i, int j, int pair) const { return comp(cindex(i, j, pair)); }

  /// R_ijkl at point p for arbitrary (k,l).
  double value(int i, int j, int k, int l, std::size_t p) const {
    if (k == l) return 0.0;
    int n = grid_.dim;
    if (k < l) return comp_ijp(i, j, pair_index(n, k, l))[p];
    return -comp_ijp(i, j, pair_index(n, l, k))[p];
  }
};

}  // namespace hypflow

#endif
