#ifndef HYPFLOW_GRID_HPP
#define HYPFLOW_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypflow {

/// Uniform periodic grid on the flat torus [0,L)^dim.
struct Grid {
  int dim = 3;        // spatial dimension, 2 or 3
  int n_axis = 8;     // points per axis
  double box = 1.0;   // side length L

  Grid() = default;
  Grid(int dim_, int n_axis_, double box_) : dim(dim_), n_axis(n_axis_), box(box_) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("Grid: dim must be 2 or 3");
    if (n_axis < 8) throw std::invalid_argument("Grid: need at least 8 points per axis");
    if (!(box > 0.0)) throw std::invalid_argument("Grid: box length must be positive");
  }

  double spacing() const { return box / n_axis; }

  std::size_t npts() const {
    std::size_t n = static_cast<std::size_t>(n_axis);
    return dim == 2 ? n * n : n * n * n;
  }

  /// Stride of axis a in the row-major flat index.
  std::size_t stride(int a) const {
    std::size_t n = static_cast<std::size_t>(n_axis);
    if (dim == 2) return a == 0 ? n : 1;
    return a == 0 ? n * n : (a == 1 ? n : 1);
  }

  double coord(int i) const { return spacing() * i; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && n_axis == o.n_axis && box == o.box;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Number of independent components of a symmetric 2-tensor.
inline int sym_count(int n) { return n * (n + 1) / 2; }

/// Packed upper-triangle index of (i,j), order (0,0),(0,1),...,(1,1),...
inline int sym_index(int n, int i, int j) {
  if (i > j) { int t = i; i = j; j = t; }
  return i * n - i * (i - 1) / 2 + (j - i);
}

/// Number of antisymmetric index pairs k<l.
inline int pair_count(int n) { return n * (n - 1) / 2; }

/// Index of the ordered pair (k,l), k<l, order (0,1),(0,2),(1,2).
inline int pair_index(int n, int k, int l) {
  return k * n - k * (k + 1) / 2 + (l - k - 1);
}

}  // namespace hypflow

#endif
