#ifndef HYPFLOW_WRAP_HPP
#define HYPFLOW_WRAP_HPP

#include <vector>

#include "hypflow/grid.hpp"

namespace hypflow {

/// Signed flat-index offsets to wrapped neighbors along one axis.
struct WrapTable {
  std::vector<long long> p1, m1, p2, m2;
  WrapTable() = default;
  WrapTable(int N, long long stride) : p1(N), m1(N), p2(N), m2(N) {
    for (int i = 0; i < N; ++i) {
      p1[i] = (((i + 1) % N) - i) * stride;
      m1[i] = (((i - 1 + N) % N) - i) * stride;
      p2[i] = (((i + 2) % N) - i) * stride;
      m2[i] = (((i - 2 + 2 * N) % N) - i) * stride;
    }
  }
};

/// Wrap tables for every axis of a grid.
struct GridWrap {
  WrapTable axis[3];
  explicit GridWrap(const Grid& g) {
    for (int a = 0; a < g.dim; ++a)
      axis[a] = WrapTable(g.n_axis, static_cast<long long>(g.stride(a)));
  }
};

}  // namespace hypflow

#endif
